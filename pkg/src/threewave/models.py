"""Built-in systems, chart atlases, and symmetries, plus their verifications.

Two model families are provided:

* the two-parameter quadratic interaction system on (x, y, z) with
  parameters (delta, gamma), together with its projective atlas U0-U3 and
  the resolved atlas T2-0..T2-3 whose transition maps are polynomial-
  compatible exactly on the parameter locus delta*gamma = gamma*(gamma+1) = 0;
* the five-parameter family (alpha1..alpha5) with its resolved atlas
  T3-0..T3-3, which is polynomial for all parameter values, and the two
  generating symmetries of that family.

Everything is built by parsing canonical-syntax sources, so the model
constructors double as round-trip tests of the file format, and every chart
map proves its own invertibility on load.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .gaussian import GaussianRational
from .geometry import Chart, ChartMap, VectorField, identity_map, pushforward
from .parsing import ModelFile, parse_model
from .ratfunc import RationalFn, substitute
from .symbols import Symbol, SymbolTable

THREE_WAVE_PARAMS = ("delta", "gamma")
MODIFIED_PARAMS = ("alpha1", "alpha2", "alpha3", "alpha4", "alpha5")

_THREE_WAVE_SRC = """
params delta gamma
chart U0 : x y z
chart U1 : X1 Y1 Z1 @ X1
chart U2 : X2 Y2 Z2 @ Y2
chart U3 : X3 Y3 Z3 @ Z3
chart W : XW YW ZW @ XW
chart T2-1 : x1 y1 z1 @ x1
chart T2-2 : x2 y2 z2 @ x2
chart T2-3 : x3 y3 z3 @ x3
system U0 : -2*y^2 + gamma*x + delta*y + z ; 2*x*y - delta*x + gamma*y ; -2*x*z - 2*z
map U0 U1 : 1/x ; y/x ; z/x | 1/X1 ; Y1/X1 ; Z1/X1
map U0 U2 : x/y ; 1/y ; z/y | X2/Y2 ; 1/Y2 ; Z2/Y2
map U0 U3 : x/z ; y/z ; 1/z | X3/Z3 ; Y3/Z3 ; 1/Z3
map U0 T2-1 : 1/x ; -(y - i*x)*x ; z*x | 1/x1 ; i/x1 - x1*y1 ; x1*z1
map U0 T2-2 : 1/x ; -(y + i*x)*x ; z*x | 1/x2 ; -i/x2 - x2*y2 ; x2*z2
map U0 T2-3 : 1/x ; -((y - delta/2)*x + delta*gamma/2)*x ; z + x^2 + 2*(gamma + 1)*x | 1/x3 ; delta/2 - delta*gamma*x3/2 - x3^2*y3 ; z3 - 1/x3^2 - 2*(gamma + 1)/x3
"""

_MODIFIED_SRC = """
params alpha1 alpha2 alpha3 alpha4 alpha5
chart U0 : x y z
chart U1 : X1 Y1 Z1 @ X1
chart U2 : X2 Y2 Z2 @ Y2
chart U3 : X3 Y3 Z3 @ Z3
chart W : XW YW ZW @ XW
chart T3-1 : x1 y1 z1 @ x1
chart T3-2 : x2 y2 z2 @ x2
chart T3-3 : x3 y3 z3 @ x3
system U0 : -2*y^2 - (alpha1 + alpha3 - 2*alpha5)*y + z + (alpha2 + alpha4 + 2*(alpha1 + alpha3)*alpha5)/2 ; 2*x*y - 2*alpha5*x + i*(alpha1 - alpha3)*y - i*(alpha2 - alpha4 + 2*(alpha1 - alpha3)*alpha5)/2 ; -2*x*z - (alpha2 + alpha4)*x + i*(alpha2 - alpha4)*y - i*(alpha1 - alpha3)*z + i*(alpha2*alpha3 - alpha1*alpha4)
map U0 U1 : 1/x ; y/x ; z/x | 1/X1 ; Y1/X1 ; Z1/X1
map U0 U2 : x/y ; 1/y ; z/y | X2/Y2 ; 1/Y2 ; Z2/Y2
map U0 U3 : x/z ; y/z ; 1/z | X3/Z3 ; Y3/Z3 ; 1/Z3
map U0 T3-1 : 1/x ; -(y - i*x + alpha1)*x ; (z + alpha2)*x | 1/x1 ; i/x1 - alpha1 - x1*y1 ; x1*z1 - alpha2
map U0 T3-2 : 1/x ; -(y + i*x + alpha3)*x ; (z + alpha4)*x | 1/x2 ; -i/x2 - alpha3 - x2*y2 ; x2*z2 - alpha4
map U0 T3-3 : 1/x ; -((y - alpha5)*x - i*(alpha2 - alpha4)/2)*x ; z + x^2 + i*(alpha1 - alpha3)*x | 1/x3 ; alpha5 + i*(alpha2 - alpha4)*x3/2 - x3^2*y3 ; z3 - 1/x3^2 - i*(alpha1 - alpha3)/x3
"""

_S_STATE_Z = (
    "(4*y^2*z - 8*alpha5*y*z + 4*i*(alpha2 - alpha4)*x*y - 4*i*(alpha2 - alpha4)*alpha5*x"
    " - 2*(alpha1 - alpha3)*(alpha2 - alpha4)*y + 4*alpha5^2*z"
    " + (alpha2 - alpha4)*(alpha2 - alpha4 + 2*(alpha1 - alpha3)*alpha5)) / (4*(y - alpha5)^2)"
)


@lru_cache(maxsize=None)
def _model(kind: str) -> ModelFile:
    if kind == "three-wave":
        return parse_model(_THREE_WAVE_SRC)
    if kind == "modified":
        return parse_model(_MODIFIED_SRC)
    raise KeyError(f"unknown model {kind!r}")


def model(kind: str) -> ModelFile:
    """The cached, fully symbolic model for 'three-wave' or 'modified'."""
    return _model(kind)


def param_symbols(kind: str) -> tuple[Symbol, ...]:
    names = THREE_WAVE_PARAMS if kind == "three-wave" else MODIFIED_PARAMS
    table = _model(kind).table
    return tuple(table.get(n) for n in names)


def bind_parameters(kind: str, values: Sequence | None) -> dict[Symbol, RationalFn]:
    """Turn user parameter values into substitution bindings (None = symbolic)."""
    syms = param_symbols(kind)
    if values is None:
        return {}
    if len(values) != len(syms):
        raise ValueError(f"expected {len(syms)} parameters, got {len(values)}")
    table = _model(kind).table
    out: dict[Symbol, RationalFn] = {}
    for sym, val in zip(syms, values):
        if val is None:
            continue
        if isinstance(val, RationalFn):
            out[sym] = val
        else:
            out[sym] = RationalFn.const(table, GaussianRational(val))
    return out


def bind_field(v: VectorField, bindings: Mapping[Symbol, RationalFn]) -> VectorField:
    if not bindings:
        return v
    comps = [substitute(c, bindings, c.table) for c in v.components]
    return VectorField(v.chart, comps)


def bind_map(m: ChartMap, bindings: Mapping[Symbol, RationalFn]) -> ChartMap:
    if not bindings:
        return m
    table = m.table
    fwd = [substitute(f, bindings, table) for f in m.forward]
    inv = [substitute(g, bindings, table) for g in m.inverse]
    return ChartMap(m.source, m.target, fwd, inv)


def three_wave_system(delta=None, gamma=None) -> VectorField:
    """The two-parameter interaction system on the base chart U0."""
    m = _model("three-wave")
    return bind_field(m.fields["U0"], bind_parameters("three-wave", (delta, gamma)))


def modified_system(alphas: Sequence | None = None) -> VectorField:
    """The five-parameter family on the base chart U0."""
    m = _model("modified")
    return bind_field(m.fields["U0"], bind_parameters("modified", alphas))


def projective_atlas(kind: str = "three-wave") -> list[ChartMap]:
    """U0 plus the three reciprocal charts covering the plane at infinity."""
    m = _model(kind)
    maps = [cm for cm in m.maps if cm.target.name in ("U1", "U2", "U3")]
    return [identity_map(m.charts["U0"], m.table)] + maps


def resolved_atlas(kind: str, params: Sequence | None = None) -> list[ChartMap]:
    """The glued-phase-space atlas (identity chart plus three twisted charts)."""
    m = _model(kind)
    prefix = "T2-" if kind == "three-wave" else "T3-"
    bindings = bind_parameters(kind, params)
    maps = [
        bind_map(cm, bindings) for cm in m.maps if cm.target.name.startswith(prefix)
    ]
    return [identity_map(m.charts["U0"], m.table)] + maps


def weighted_chart_map(kind: str, exponents: tuple[int, int, int]) -> ChartMap:
    """Chart (1/x, y/x^n, z/x^p) adapted to pole orders (m, n, p)."""
    from .geometry import power_scaled_chart

    m = _model(kind)
    table = m.table
    w = m.charts["W"]
    return power_scaled_chart(m.charts["U0"], table, "W", w.vars, exponents)


# -- holomorphy verification --------------------------------------------------------


def verify_atlas_holomorphy(v: VectorField, atlas: Sequence[ChartMap]) -> list[dict]:
    """Per-chart verdict: is the pushforward of ``v`` polynomial there?

    Non-polynomial charts report the offending denominators and, when the
    poles sit on the chart's boundary divisor, the parameter conditions
    whose vanishing would make the components polynomial.
    """
    from .singular import holomorphy_obstructions

    out = []
    for cmap in atlas:
        w = pushforward(v, cmap)
        witnesses = [c.den.text() for c in w.components if not c.is_polynomial()]
        conditions: list[str] = []
        if witnesses and cmap.target.boundary is not None:
            try:
                conditions = holomorphy_obstructions(w, cmap.target.boundary).texts()
            except ValueError:
                conditions = []
        out.append(
            {
                "chart": cmap.target.name,
                "polynomial": not witnesses,
                "witnesses": witnesses,
                "obstruction_conditions": conditions,
                "components": [c.text() for c in w.components],
            }
        )
    return out


# -- symmetries -----------------------------------------------------------------------


class SymmetryMap:
    """A birational state map combined with a parameter substitution.

    The map acts as (x; alpha) -> (state(x; alpha); param_map(alpha)). Both
    generators of the five-parameter family are involutions in the twisted
    sense: applying the state map with mapped parameters undoes it, which is
    exactly the inverse the underlying ChartMap needs.
    """

    __slots__ = ("name", "chart", "state", "param_map")

    def __init__(
        self,
        name: str,
        chart: Chart,
        state: Sequence[RationalFn],
        param_map: Mapping[Symbol, RationalFn],
    ):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "state", tuple(state))
        object.__setattr__(self, "param_map", dict(param_map))

    def __setattr__(self, name, value):
        raise AttributeError("SymmetryMap is immutable")

    @property
    def table(self) -> SymbolTable:
        return self.state[0].table

    def map_params(self, rf: RationalFn) -> RationalFn:
        return substitute(rf, self.param_map, rf.table)

    def as_chart_map(self, check: bool = True) -> ChartMap:
        inverse = [self.map_params(c) for c in self.state]
        return ChartMap(self.chart, self.chart, self.state, inverse, check=check)

    def compose(self, inner: "SymmetryMap") -> "SymmetryMap":
        """The map self o inner (apply ``inner`` first)."""
        table = self.table
        bindings: dict[Symbol, RationalFn] = {
            self.chart.vars[k]: inner.state[k] for k in range(3)
        }
        bindings.update(inner.param_map)
        new_state = [substitute(c, bindings, table) for c in self.state]
        new_pmap = {
            p: substitute(expr, inner.param_map, table) for p, expr in self.param_map.items()
        }
        return SymmetryMap(f"{self.name}*{inner.name}", self.chart, new_state, new_pmap)

    def is_identity(self) -> bool:
        table = self.table
        for k, s in enumerate(self.chart.vars):
            if self.state[k] != RationalFn.var(table, s):
                return False
        for p, expr in self.param_map.items():
            if expr != RationalFn.var(table, p):
                return False
        return True


def symmetry_generators() -> dict[str, SymmetryMap]:
    """The two generating symmetries of the five-parameter family."""
    m = _model("modified")
    table = m.table
    chart = m.charts["U0"]
    a1, a2, a3, a4, a5 = (RationalFn.var(table, n) for n in MODIFIED_PARAMS)
    syms = {n: table.get(n) for n in MODIFIED_PARAMS}
    from .parsing import parse_expr

    x, y, z = (RationalFn.var(table, s) for s in chart.vars)

    pi = SymmetryMap(
        "pi",
        chart,
        (x, -y, z),
        {
            syms["alpha1"]: -a3,
            syms["alpha2"]: a4,
            syms["alpha3"]: -a1,
            syms["alpha4"]: a2,
            syms["alpha5"]: -a5,
        },
    )
    i_rf = RationalFn.const(table, GaussianRational(0, 1))
    sx = x - i_rf * (a2 - a4) / (2 * (y - a5))
    sz = parse_expr(_S_STATE_Z, table)
    s = SymmetryMap(
        "s",
        chart,
        (sx, y, sz),
        {
            syms["alpha1"]: a1,
            syms["alpha2"]: a4,
            syms["alpha3"]: a3,
            syms["alpha4"]: a2,
            syms["alpha5"]: a5,
        },
    )
    return {"pi": pi, "s": s}


def verify_symmetry(v: VectorField, sigma: SymmetryMap) -> dict:
    """Residual of the invariance claim: pushforward under sigma minus the
    field with mapped parameters. A zero triple means exact invariance."""
    cm = sigma.as_chart_map()
    moved = pushforward(v, cm)
    target = VectorField(v.chart, [sigma.map_params(c) for c in v.components])
    residual = [moved.components[k] - target.components[k] for k in range(3)]
    return {
        "symmetry": sigma.name,
        "invariant": all(r.is_zero() for r in residual),
        "residual": [r.text() for r in residual],
        "mapped_field": [c.text() for c in moved.components],
    }


def verify_group_relations(gens: Mapping[str, SymmetryMap] | None = None) -> dict:
    """Check s^2 = pi^2 = (s*pi)^2 = identity as exact rational-map identities."""
    if gens is None:
        gens = symmetry_generators()
    s, pi = gens["s"], gens["pi"]
    spi = s.compose(pi)
    checks = {
        "s^2": s.compose(s).is_identity(),
        "pi^2": pi.compose(pi).is_identity(),
        "(s*pi)^2": spi.compose(spi).is_identity(),
    }
    return {"relations": checks, "all_hold": all(checks.values())}


def export_model(kind: str, which: str = "resolved") -> str:
    """Serialize a built-in system plus one of its atlases to the model-file
    format, so modified copies can be fed back through the CLI."""
    from .parsing import render_model

    m = _model(kind)
    if which == "resolved":
        maps = [cm for cm in m.maps if cm.target.name.startswith(("T2-", "T3-"))]
    elif which == "projective":
        maps = [cm for cm in m.maps if cm.target.name in ("U1", "U2", "U3")]
    else:
        raise KeyError(f"unknown atlas {which!r}")
    charts = [m.charts["U0"]] + [cm.target for cm in maps]
    return render_model(charts, maps, {"U0": m.fields["U0"]}, list(m.table.parameters()))


# -- cross-family comparison ------------------------------------------------------------


def compare_with_three_wave(delta=0) -> dict:
    """Specialize the five-parameter family at alpha = (0,0,0,0,delta/2) and
    subtract the two-parameter system at (delta, 0), documenting the exact
    difference (the z-equations differ by a linear term)."""
    from .symbols import table as make_table

    t = make_table("x", "y", "z", "delta:parameter")
    from .parsing import parse_expr as pe

    d = RationalFn.var(t, "delta") if delta is None else RationalFn.const(t, GaussianRational(delta))
    three = [
        pe("-2*y^2 + z", t) + d * RationalFn.var(t, "y"),
        pe("2*x*y", t) - d * RationalFn.var(t, "x"),
        pe("-2*x*z - 2*z", t),
    ]
    m = _model("modified")
    half = GaussianRational(1) / GaussianRational(2)
    alpha_vals = [RationalFn.const(t, 0)] * 4 + [d * half]
    bindings = dict(zip(param_symbols("modified"), alpha_vals))
    for s in ("x", "y", "z"):
        bindings[m.table.get(s)] = RationalFn.var(t, s)
    modified = [substitute(c, bindings, t) for c in m.fields["U0"].components]
    diff = [a - b for a, b in zip(modified, three)]
    return {
        "alpha_specialization": [v.text() for v in alpha_vals],
        "difference": [c.text() for c in diff],
        "matches": all(c.is_zero() for c in diff),
    }
