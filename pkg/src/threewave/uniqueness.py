"""Classification of quadratic polynomial systems by atlas holomorphy.

A general degree <= 2 ansatz (30 unknown coefficients, 10 monomials per
component) is pushed through every twisted chart of the five-parameter
resolved atlas. Requiring each pushforward to be polynomial makes every
coefficient of a negative boundary power vanish; those coefficients are
linear in the ansatz unknowns with polynomial coefficients in the five
parameters, so the classification reduces to one exact linear solve.

Polynomiality is scale invariant (any constant multiple of a solution is a
solution), so the homogeneous system has a one-dimensional null space and
pinning a single coefficient -- the y^2 coefficient of the first component
to -2, the value the five-parameter family uses -- makes the solution
unique. The solve reports the homogeneous rank/nullity as well, so the
scale-freedom claim is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ThreeWaveError
from .geometry import Chart, ChartMap, VectorField
from .linalg import LinearSolution, linear_solve
from .models import MODIFIED_PARAMS, model, modified_system
from .poly import MultiPoly
from .ratfunc import RationalFn
from .symbols import Symbol, SymbolTable, parameter, state

# monomial basis per component: 1, x, y, z, x^2, xy, xz, y^2, yz, z^2
MONOMIAL_EXPONENTS = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (2, 0, 0),
    (1, 1, 0),
    (1, 0, 1),
    (0, 2, 0),
    (0, 1, 1),
    (0, 0, 2),
)
NORMALIZED_MONOMIAL = (0, 2, 0)  # y^2 in the first component
NORMALIZED_VALUE = -2


@dataclass(frozen=True)
class AnsatzContext:
    table: SymbolTable
    chart: Chart
    field: VectorField
    coefficients: tuple[Symbol, ...]  # c1..c30, component-major
    atlas: tuple[ChartMap, ...]  # the three twisted charts


@dataclass(frozen=True)
class ConstraintSystem:
    context: AnsatzContext
    rows: tuple[tuple[RationalFn, ...], ...]
    row_origins: tuple[str, ...]  # chart/component/monomial labels


@dataclass(frozen=True)
class UniquenessReport:
    constraints: int
    homogeneous_rank: int
    homogeneous_nullity: int
    solution: LinearSolution
    recovered: VectorField | None
    matches_reference: bool
    quadratic_part_nonzero: bool
    coefficient_values: tuple[RationalFn, ...] | None


def ansatz_context() -> AnsatzContext:
    """The 30-coefficient quadratic ansatz over a lean symbol table holding
    only the base chart, the three twisted charts, the parameters, and the
    coefficient unknowns."""
    m = model("modified")
    states = [state(n) for n in ("x", "y", "z", "x1", "y1", "z1", "x2", "y2", "z2", "x3", "y3", "z3")]
    params = [parameter(n) for n in MODIFIED_PARAMS]
    coeffs = [parameter(f"c{i}") for i in range(1, 31)]
    table = SymbolTable(tuple(states) + tuple(params) + tuple(coeffs))
    chart = Chart("U0", (table.get("x"), table.get("y"), table.get("z")))
    comps = []
    idx = 0
    for comp in range(3):
        acc = MultiPoly.zero(table)
        for exps in MONOMIAL_EXPONENTS:
            mono = MultiPoly.const(table, 1)
            for s, e in zip(("x", "y", "z"), exps):
                if e:
                    mono = mono * MultiPoly.var(table, s) ** e
            acc = acc + MultiPoly.var(table, coeffs[idx]) * mono
            idx += 1
        comps.append(RationalFn.from_poly(acc))
    field = VectorField(chart, comps)
    twisted = []
    for cmap in m.maps:
        if not cmap.target.name.startswith("T3-"):
            continue
        fwd = [f.retable(table) for f in cmap.forward]
        inv = [g.retable(table) for g in cmap.inverse]
        source = Chart("U0", chart.vars)
        twisted.append(ChartMap(source, cmap.target, fwd, inv, check=False))
    return AnsatzContext(table, chart, field, tuple(coeffs), tuple(twisted))


def build_constraints(context: AnsatzContext | None = None) -> ConstraintSystem:
    """Linear conditions in the ansatz coefficients from every twisted chart.

    Each pushforward component is num / boundary^k; every coefficient (in
    the chart variables) of a negative boundary power must vanish. The rows
    are linear forms in c1..c30 with entries polynomial in the parameters;
    the identity chart contributes nothing.
    """
    from .geometry import pushforward

    if context is None:
        context = ansatz_context()
    table = context.table
    rows: list[tuple[RationalFn, ...]] = []
    origins: list[str] = []
    zero = RationalFn.const(table, 0)
    for cmap in context.atlas:
        boundary = cmap.target.boundary
        k_b = table.index(boundary)
        w = pushforward(context.field, cmap)
        for ci, comp in enumerate(w.components):
            if comp.is_polynomial():
                continue
            den = comp.den
            if not den.is_monomial():
                raise ThreeWaveError(f"unexpected denominator {den.text()} in ansatz pushforward")
            ((dexp, _),) = den.terms.items()
            order = dexp[k_b]
            low = {e: c for e, c in comp.num.terms.items() if e[k_b] < order}
            if not low:
                continue
            groups = MultiPoly(table, low).split_by_state_monomial()
            for key, poly in groups.items():
                linear, const = _linear_form(poly, context.coefficients, table)
                if not const.is_zero():
                    raise ThreeWaveError("constraint system is not homogeneous in the ansatz")
                row = [RationalFn.from_poly(linear.get(c, MultiPoly.zero(table))) for c in context.coefficients]
                if all(r.is_zero() for r in row):
                    continue
                rows.append(tuple(row))
                origins.append(f"{cmap.target.name}:component{ci + 1}:{_key_text(key, table)}")
    return ConstraintSystem(context, tuple(rows), tuple(origins))


def _key_text(key: tuple[int, ...], table: SymbolTable) -> str:
    parts = [
        f"{table.symbols[i].name}^{e}" if e > 1 else table.symbols[i].name
        for i, e in enumerate(key)
        if e
    ]
    return "*".join(parts) if parts else "1"


def _linear_form(p: MultiPoly, unknowns: tuple[Symbol, ...], table: SymbolTable):
    """Split a polynomial that is linear in ``unknowns`` into coefficient map
    plus constant part; degree >= 2 in the unknowns is an error."""
    idx = {table.index(c): c for c in unknowns}
    coeffs: dict[Symbol, MultiPoly] = {}
    const = MultiPoly.zero(table)
    for e, coeff in p.terms.items():
        hits = [(k, d) for k, d in enumerate(e) if d and k in idx]
        if not hits:
            const = const + MultiPoly(table, {e: coeff})
            continue
        if len(hits) > 1 or hits[0][1] > 1:
            raise ThreeWaveError("expected a linear form in the ansatz coefficients")
        k, _ = hits[0]
        stripped = list(e)
        stripped[k] = 0
        sym = idx[k]
        coeffs[sym] = coeffs.get(sym, MultiPoly.zero(table)) + MultiPoly(table, {tuple(stripped): coeff})
    return coeffs, const


def solve_ansatz(constraints: ConstraintSystem | None = None) -> UniquenessReport:
    """Solve the holomorphy constraints and compare with the five-parameter
    family.

    The homogeneous system is solved first (its nullity measures the true
    solution-space dimension: 1 = the family up to time rescaling); adding
    the scale normalization row then pins the unique representative, which
    is compared against the reference system coefficient by coefficient.
    """
    if constraints is None:
        constraints = build_constraints()
    ctx = constraints.context
    table = ctx.table
    matrix = [list(r) for r in constraints.rows]
    hom = linear_solve(matrix, None, table=table)

    # the normalized coefficient lives in component 1 (offset 0)
    norm_index = MONOMIAL_EXPONENTS.index(NORMALIZED_MONOMIAL)
    zero = RationalFn.const(table, 0)
    one = RationalFn.const(table, 1)
    norm_row = [zero] * len(ctx.coefficients)
    norm_row[norm_index] = one
    rhs = [zero] * len(matrix) + [RationalFn.const(table, NORMALIZED_VALUE)]
    solution = linear_solve(matrix + [norm_row], rhs, table=table)

    recovered = None
    matches = False
    quad_ok = False
    values = None
    if solution.consistent and not solution.nullspace:
        values = solution.particular
        comps = []
        idx = 0
        for comp in range(3):
            acc = RationalFn.const(table, 0)
            for exps in MONOMIAL_EXPONENTS:
                mono = RationalFn.const(table, 1)
                for s, e in zip(("x", "y", "z"), exps):
                    if e:
                        mono = mono * RationalFn.var(table, s) ** e
                acc = acc + values[idx] * mono
                idx += 1
            comps.append(acc)
        recovered = VectorField(ctx.chart, comps)
        matches = _matches_reference(recovered, table)
        quad_ok = any(
            not values[c * 10 + mi].is_zero()
            for c in range(3)
            for mi, exps in enumerate(MONOMIAL_EXPONENTS)
            if sum(exps) == 2
        )
    return UniquenessReport(
        constraints=len(constraints.rows),
        homogeneous_rank=hom.rank,
        homogeneous_nullity=hom.nullity,
        solution=solution,
        recovered=recovered,
        matches_reference=matches,
        quadratic_part_nonzero=quad_ok,
        coefficient_values=values,
    )


def _matches_reference(recovered: VectorField, table: SymbolTable) -> bool:
    reference = modified_system()
    ref_comps = [c.retable(table) for c in reference.components]
    return all(r == c for r, c in zip(ref_comps, recovered.components))


def reference_coefficients(table: SymbolTable) -> tuple[RationalFn, ...]:
    """The 30 coefficient values of the five-parameter family itself."""
    reference = modified_system()
    out = []
    state_slots = [table.index(n) for n in ("x", "y", "z")]
    for comp in reference.components:
        poly = comp.retable(table).as_poly()
        groups = poly.split_by_state_monomial()
        lookup = {}
        for key, val in groups.items():
            exps = tuple(key[s] for s in state_slots)
            lookup[exps] = val
        for exps in MONOMIAL_EXPONENTS:
            val = lookup.get(exps)
            out.append(RationalFn.from_poly(val) if val is not None else RationalFn.const(table, 0))
    return tuple(out)
