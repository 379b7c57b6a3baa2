"""Charts, vector fields, birational chart maps, and their calculus.

A chart is a named copy of C^3 with three state symbols; all charts of one
analysis session live in a single shared symbol table together with the
parameters. A :class:`ChartMap` carries both directions of a birational map
and *proves itself* at construction by composing them symbolically -- a map
that is not exactly invertible is rejected at load time, not at use time.

The pushforward of a vector field transforms the components with the chain
rule and re-expresses them in the target coordinates; results stay reduced
rational functions even when they happen to be polynomial (polynomiality is
a separate, cheap query).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import PoleTooHigh
from .gaussian import GaussianRational
from .poly import MultiPoly
from .ratfunc import RationalFn, substitute
from .symbols import Symbol, SymbolTable


@dataclass(frozen=True)
class Chart:
    """A named coordinate patch with its three state symbols.

    ``boundary`` marks the local equation of the divisor at infinity (or of
    the exceptional divisor for blow-up charts), when there is one.
    """

    name: str
    vars: tuple[Symbol, Symbol, Symbol]
    boundary: Symbol | None = None

    def __post_init__(self):
        if len(self.vars) != 3:
            raise ValueError("charts are three-dimensional")
        if self.boundary is not None and self.boundary not in self.vars:
            raise ValueError("boundary symbol must be one of the chart variables")

    def var_index(self, sym: Symbol) -> int:
        return self.vars.index(sym)


class VectorField:
    """An autonomous rational vector field attached to a chart."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[RationalFn]):
        comps = tuple(components)
        if len(comps) != 3:
            raise ValueError("vector fields are three-dimensional")
        table = comps[0].table
        for c in comps:
            if c.table != table:
                raise ValueError("vector-field components must share one symbol table")
        for s in chart.vars:
            if s not in table:
                raise ValueError(f"chart variable {s.name!r} missing from component table")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @property
    def table(self) -> SymbolTable:
        return self.components[0].table

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.components)

    def specialize(self, bindings: Mapping[Symbol, GaussianRational]) -> "VectorField":
        return VectorField(self.chart, [c.specialize(bindings) for c in self.components])

    def retable(self, new_table: SymbolTable) -> "VectorField":
        return VectorField(self.chart, [c.retable(new_table) for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __repr__(self):
        comps = ", ".join(c.text() for c in self.components)
        return f"VectorField[{self.chart.name}]({comps})"


class ChartMap:
    """A birational map between charts, verified invertible at construction."""

    __slots__ = ("source", "target", "forward", "inverse")

    def __init__(
        self,
        source: Chart,
        target: Chart,
        forward: Sequence[RationalFn],
        inverse: Sequence[RationalFn],
        check: bool = True,
    ):
        fwd, inv = tuple(forward), tuple(inverse)
        if len(fwd) != 3 or len(inv) != 3:
            raise ValueError("chart maps are triples")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", inv)
        if check:
            self._verify()

    def __setattr__(self, name, value):
        raise AttributeError("ChartMap is immutable")

    @property
    def table(self) -> SymbolTable:
        return self.forward[0].table

    def _verify(self):
        table = self.table
        fwd_binding = {self.target.vars[k]: self.forward[k] for k in range(3)}
        for k in range(3):
            back = substitute(self.inverse[k], fwd_binding, table)
            if back != RationalFn.var(table, self.source.vars[k]):
                raise ValueError(
                    f"chart map {self.source.name}->{self.target.name} is not invertible: "
                    f"inverse o forward gives {back.text()} for {self.source.vars[k].name}"
                )
        inv_binding = {self.source.vars[k]: self.inverse[k] for k in range(3)}
        for k in range(3):
            forth = substitute(self.forward[k], inv_binding, table)
            if forth != RationalFn.var(table, self.target.vars[k]):
                raise ValueError(
                    f"chart map {self.source.name}->{self.target.name} is not invertible: "
                    f"forward o inverse gives {forth.text()} for {self.target.vars[k].name}"
                )

    def reversed(self) -> "ChartMap":
        return ChartMap(self.target, self.source, self.inverse, self.forward, check=False)

    def compose(self, then: "ChartMap") -> "ChartMap":
        """The map ``then o self`` (apply self first)."""
        if self.target != then.source:
            raise ValueError("charts do not chain")
        table = self.table
        fwd_binding = {then.source.vars[k]: self.forward[k] for k in range(3)}
        inv_binding = {self.target.vars[k]: then.inverse[k] for k in range(3)}
        fwd = [substitute(f, fwd_binding, table) for f in then.forward]
        inv = [substitute(g, inv_binding, table) for g in self.inverse]
        return ChartMap(self.source, then.target, fwd, inv, check=False)

    def __repr__(self):
        return f"ChartMap({self.source.name} -> {self.target.name})"


def identity_map(chart: Chart, table: SymbolTable) -> ChartMap:
    comps = [RationalFn.var(table, s) for s in chart.vars]
    return ChartMap(chart, chart, comps, comps, check=False)


def jacobian_matrix(cmap: ChartMap) -> list[list[RationalFn]]:
    """Partial derivatives d(forward_k)/d(source_j) as reduced fractions."""
    return [[f.derivative(s) for s in cmap.source.vars] for f in cmap.forward]


def jacobian_determinant(cmap: ChartMap) -> RationalFn:
    m = jacobian_matrix(cmap)
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return det


def pushforward(v: VectorField, cmap: ChartMap) -> VectorField:
    """Transform ``v`` by ``cmap``: chain rule, then rewrite in target coords.

    Component k of the result is sum_j d(forward_k)/d(x_j) * v_j composed
    with the inverse map; everything is exact and returned reduced.
    """
    if v.chart != cmap.source:
        raise ValueError(f"field lives on {v.chart.name}, map starts at {cmap.source.name}")
    table = v.table
    inv_binding = {cmap.source.vars[j]: cmap.inverse[j] for j in range(3)}
    out = []
    for k in range(3):
        acc = RationalFn.const(table, 0)
        fk = cmap.forward[k]
        for j in range(3):
            dkj = fk.derivative(cmap.source.vars[j])
            if dkj.is_zero() or v.components[j].is_zero():
                continue
            acc = acc + dkj * v.components[j]
        out.append(substitute(acc, inv_binding, table))
    return VectorField(cmap.target, out)


@dataclass(frozen=True)
class LogPoleForm:
    """Certificate that a field has at worst a simple log pole on a divisor:
    the boundary component is polynomial and every transverse component times
    the boundary variable is polynomial."""

    boundary: Symbol
    boundary_part: MultiPoly  # g for the boundary variable itself
    transverse: tuple[tuple[Symbol, MultiPoly], ...]  # (variable, g) pairs

    def parts_in_chart_order(self, chart: Chart) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
        lookup = dict(self.transverse)
        lookup[self.boundary] = self.boundary_part
        return tuple(lookup[s] for s in chart.vars)


def log_pole_decomposition(v: VectorField, boundary: Symbol) -> LogPoleForm:
    """Split ``v`` as d(x1)/dt = g1, d(xk)/dt = gk/x1 with polynomial g's.

    Raises :class:`~threewave.errors.PoleTooHigh` when a component has a pole
    of order >= 2 along ``boundary`` or any pole along a different divisor.
    """
    if boundary not in v.chart.vars:
        raise ValueError(f"{boundary.name!r} is not a variable of chart {v.chart.name}")
    table = v.table
    b = RationalFn.var(table, boundary)
    bpart = None
    transverse = []
    for sym, comp in zip(v.chart.vars, v.components):
        if sym == boundary:
            if not comp.is_polynomial():
                raise PoleTooHigh(
                    f"boundary component d{sym.name}/dt is not polynomial",
                    component=sym.name,
                    witness=comp.den,
                )
            bpart = comp.as_poly()
        else:
            scaled = b * comp
            if not scaled.is_polynomial():
                raise PoleTooHigh(
                    f"component d{sym.name}/dt has a pole beyond 1/{boundary.name}",
                    component=sym.name,
                    witness=scaled.den,
                )
            transverse.append((sym, scaled.as_poly()))
    return LogPoleForm(boundary=boundary, boundary_part=bpart, transverse=tuple(transverse))


def power_scaled_chart(
    source: Chart,
    table: SymbolTable,
    name: str,
    new_vars: tuple[Symbol, Symbol, Symbol],
    exponents: tuple[int, int, int],
) -> ChartMap:
    """Chart adapted to pole orders (m, n, p): (1/x, y/x^n, z/x^p).

    The first new coordinate is the reciprocal of the first source variable
    regardless of m; the others are scaled by its powers. The first new
    variable is the boundary of the target chart.
    """
    x = RationalFn.var(table, source.vars[0])
    y = RationalFn.var(table, source.vars[1])
    z = RationalFn.var(table, source.vars[2])
    _, n, p = exponents
    fwd = [1 / x, y / x**n, z / x**p]
    nx = RationalFn.var(table, new_vars[0])
    ny = RationalFn.var(table, new_vars[1])
    nz = RationalFn.var(table, new_vars[2])
    inv = [1 / nx, ny / nx**n, nz / nx**p]
    target = Chart(name, new_vars, boundary=new_vars[0])
    return ChartMap(source, target, fwd, inv)
