"""Reduced rational functions: the universal currency for charts and fields.

A :class:`RationalFn` is a pair num/den of :class:`~threewave.poly.MultiPoly`
over one table, kept in the canonical reduced form

* gcd(num, den) is a unit, and
* den is monic under the graded-lex order (the unit is pushed into num).

With both rules a value has exactly one representation, so equality and
hashing are structural. Construction always reduces; the arithmetic here is
therefore "reduce-always", which keeps long pushforward/substitution chains
from accumulating junk factors.
"""

from __future__ import annotations

from typing import Mapping

from .errors import DenominatorVanishes, NotDivisible
from .gaussian import GaussianRational
from .poly import MultiPoly, poly_gcd
from .symbols import Symbol, SymbolTable


class RationalFn:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, _reduced: bool = False):
        if den is None:
            den = MultiPoly.const(num.table, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_poly(p: MultiPoly) -> "RationalFn":
        return RationalFn(p, MultiPoly.const(p.table, 1), _reduced=True)

    @staticmethod
    def const(table: SymbolTable, value) -> "RationalFn":
        return RationalFn.from_poly(MultiPoly.const(table, value))

    @staticmethod
    def var(table: SymbolTable, sym: Symbol | str) -> "RationalFn":
        return RationalFn.from_poly(MultiPoly.var(table, sym))

    @property
    def table(self) -> SymbolTable:
        return self.num.table

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> GaussianRational:
        return self.num.constant_value() / self.den.constant_value()

    def is_integer(self) -> bool:
        return self.is_constant() and self.constant_value().is_integer()

    def as_poly(self) -> MultiPoly:
        """The numerator when the value is a polynomial (monic-1 denominator)."""
        if not self.is_polynomial():
            raise NotDivisible("value is not polynomial", remainder=self.den)
        return self.num.exact_divide(self.den)

    def variables(self) -> tuple[Symbol, ...]:
        seen = dict.fromkeys(self.num.variables())
        seen.update(dict.fromkeys(self.den.variables()))
        return tuple(seen)

    def depends_only_on_parameters(self) -> bool:
        return all(s.kind == "parameter" for s in self.variables())

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "RationalFn | None":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, MultiPoly):
            return RationalFn.from_poly(other)
        if isinstance(other, (int, GaussianRational)):
            return RationalFn.const(self.table, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        return RationalFn(self.num**n, self.den**n)

    def derivative(self, sym: Symbol | str) -> "RationalFn":
        dn = self.num.derivative(sym)
        dd = self.den.derivative(sym)
        if dd.is_zero():
            return RationalFn(dn, self.den)
        return RationalFn(dn * self.den - self.num * dd, self.den * self.den)

    # -- substitution -----------------------------------------------------------

    def specialize(self, bindings: Mapping[Symbol, GaussianRational]) -> "RationalFn":
        den = self.den.specialize(bindings)
        if den.is_zero():
            raise DenominatorVanishes("denominator vanishes at the given values")
        return RationalFn(self.num.specialize(bindings), den)

    def eval_exact(self, bindings: Mapping[Symbol, GaussianRational]) -> GaussianRational:
        v = self.specialize(bindings)
        return v.constant_value()

    def eval_complex(self, values: Mapping[str, complex]) -> complex:
        return self.num.eval_complex(values) / self.den.eval_complex(values)

    def retable(self, new_table: SymbolTable) -> "RationalFn":
        return RationalFn(self.num.retable(new_table), self.den.retable(new_table), _reduced=True)

    # -- comparison / printing ----------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def text(self) -> str:
        if self.is_polynomial():
            return self.num.text()
        num = self.num.text()
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den.text()})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RationalFn({self.text()})"


def _reduce(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if num.is_zero():
        return num, MultiPoly.const(num.table, 1)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.exact_divide(g)
            den = den.exact_divide(g)
    lc = den.leading_coefficient()
    if not lc.is_one():
        inv = lc.inverse()
        num = num.map_coefficients(lambda c: c * inv)
        den = den.map_coefficients(lambda c: c * inv)
    return num, den


def substitute(
    f: RationalFn,
    bindings: Mapping[Symbol, RationalFn],
    target_table: SymbolTable | None = None,
) -> RationalFn:
    """Compose ``f`` with rational-function bindings, exactly.

    Every state symbol occurring in ``f`` must be bound (parameters may be
    bound too, e.g. for specialization); unbound symbols are carried through
    and must exist in the target table. Raises
    :class:`~threewave.errors.DenominatorVanishes` when the composed
    denominator is identically zero.
    """
    table = target_table
    if table is None:
        for v in bindings.values():
            table = v.table
            break
        else:
            table = f.table
    num = _substitute_poly(f.num, bindings, table)
    den = _substitute_poly(f.den, bindings, table)
    if den.is_zero():
        raise DenominatorVanishes("denominator identically zero after composition")
    return num / den


def _substitute_poly(
    p: MultiPoly, bindings: Mapping[Symbol, RationalFn], table: SymbolTable
) -> RationalFn:
    """Substitute into a polynomial via a single common denominator.

    With d_s the maximal exponent of each bound symbol s, each term
    c * prod s^{e_s} maps to c * prod num_s^{e_s} den_s^{d_s - e_s} over the
    global denominator prod den_s^{d_s}; this avoids quadratic blowup from
    term-by-term fraction addition.
    """
    by_name = {s.name: v for s, v in bindings.items()}
    for s in p.variables():
        if s.name not in by_name and s not in table:
            raise KeyError(f"symbol {s.name!r} neither bound nor present in target table")
    src = p.table.symbols
    maxdeg = [0] * len(src)
    for e in p.terms:
        for k, d in enumerate(e):
            if d > maxdeg[k]:
                maxdeg[k] = d
    num_pow: dict[int, list[MultiPoly]] = {}
    den_pow: dict[int, list[MultiPoly]] = {}
    one = MultiPoly.const(table, 1)
    for k, s in enumerate(src):
        if maxdeg[k] == 0:
            continue
        b = by_name.get(s.name)
        if b is None:
            b = RationalFn.var(table, table.get(s.name))
        elif b.table != table:
            b = b.retable(table)
        num_pow[k] = _powers(b.num, maxdeg[k])
        den_pow[k] = _powers(b.den, maxdeg[k])
    total = MultiPoly.zero(table)
    for e, c in p.terms.items():
        term = MultiPoly.const(table, c)
        for k, d in enumerate(e):
            if maxdeg[k] == 0:
                continue
            if d:
                term = term * num_pow[k][d]
            if maxdeg[k] - d:
                term = term * den_pow[k][maxdeg[k] - d]
        total = total + term
    if total.is_zero():
        return RationalFn.from_poly(total)
    den = one
    for k, d in enumerate(maxdeg):
        if d:
            den = den * den_pow[k][d]
    return RationalFn(total, den)


def _powers(p: MultiPoly, n: int) -> list[MultiPoly]:
    out = [MultiPoly.const(p.table, 1), p]
    for _ in range(n - 1):
        out.append(out[-1] * p)
    return out
