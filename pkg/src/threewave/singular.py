"""Accessible singularities, local indices, scaling-limit classification,
dominant-balance search, and the blow-up engine.

The sequence implemented here mirrors how a degenerate point on the boundary
divisor gets resolved:

1. :func:`find_accessible` locates the points of the divisor where solutions
   can leave it (the transverse components of the log-pole form vanish),
2. :func:`linear_part` / :func:`local_index` extract the eigenvalue data that
   classifies each point and predicts how many blow-ups are needed,
3. :func:`painleve_leading_orders` searches dominant balances, whose pole
   orders pick the weighted chart suited to a multiple point,
4. :func:`blow_up` produces the directional charts of a point blow-up with
   the transformed field, and
5. :func:`holomorphy_obstructions` reads off the parameter conditions under
   which the final field is polynomial.

All computations are exact; every reported point is re-verified by
substitution before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import PositiveDimensional, UnresolvedSpectrum
from .gaussian import GaussianRational
from .geometry import Chart, ChartMap, VectorField, log_pole_decomposition, pushforward
from .poly import MultiPoly, poly_gcd, resultant
from .ratfunc import RationalFn, substitute
from .roots import find_roots
from .symbols import Symbol, parameter


@dataclass(frozen=True)
class AccessiblePoint:
    chart: Chart
    coords: tuple[RationalFn, RationalFn, RationalFn]  # chart-variable order
    boundary: Symbol
    multiplicity: int = 1

    def coord_of(self, sym: Symbol) -> RationalFn:
        return self.coords[self.chart.vars.index(sym)]

    def text(self) -> str:
        inner = ", ".join(c.text() for c in self.coords)
        return f"({inner})"


@dataclass(frozen=True)
class AccessibleScan:
    """Search result: verified points plus any unresolved residual branches."""

    points: tuple[AccessiblePoint, ...]
    residuals: tuple[str, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)


def find_accessible(v: VectorField, boundary: Symbol | None = None) -> AccessibleScan:
    """All points of {boundary = 0} where the transverse log-pole parts vanish.

    The two transverse polynomials restricted to the divisor are solved by
    resultant elimination plus exact root extraction; solutions outside the
    Gaussian-rational parameter field are reported as residual branches.
    Raises :class:`PositiveDimensional` when the solution set contains a curve.
    """
    chart = v.chart
    if boundary is None:
        boundary = chart.boundary
    if boundary is None:
        raise ValueError(f"chart {chart.name} has no boundary variable")
    lp = log_pole_decomposition(v, boundary)
    table = v.table
    zero = {table.get(boundary.name): GaussianRational(0)}
    gs = [(sym, g.specialize(zero)) for sym, g in lp.transverse]
    (u_sym, gu), (w_sym, gw) = gs

    solutions, residuals = _solve_boundary_pair(gu, gw, u_sym, w_sym)

    points = []
    for sol, mult in solutions:
        coords = []
        for s in chart.vars:
            if s == boundary:
                coords.append(RationalFn.const(table, 0))
            else:
                coords.append(sol[s])
        point = AccessiblePoint(chart, tuple(coords), boundary, mult)
        if not _verify_point(gs, point):
            raise AssertionError(f"candidate point {point.text()} failed exact re-verification")
        points.append(point)
    points.sort(key=lambda p: p.text())
    return AccessibleScan(tuple(points), tuple(residuals))


def _verify_point(gs, point: AccessiblePoint) -> bool:
    bindings = {s: point.coords[k] for k, s in enumerate(point.chart.vars)}
    for _, g in gs:
        val = substitute(RationalFn.from_poly(g), bindings, g.table)
        if not val.is_zero():
            return False
    return True


def _solve_boundary_pair(gu: MultiPoly, gw: MultiPoly, u: Symbol, w: Symbol):
    """Common zeros of two polynomials in (u, w) over the parameter field."""
    table = gu.table
    if gu.is_zero() and gw.is_zero():
        raise PositiveDimensional("both transverse components vanish on the whole divisor")
    if gu.is_zero() or gw.is_zero():
        g = gw if gu.is_zero() else gu
        if g.degree(u) > 0 or g.degree(w) > 0:
            raise PositiveDimensional(
                "one transverse component vanishes identically; the other cuts a curve"
            )
        return [], ()
    du = max(gu.degree(u), 0), max(gw.degree(u), 0)
    if du[0] == 0 and du[1] == 0:
        # both depend on w alone: any common root leaves u free
        g = poly_gcd(gu, gw)
        if g.degree(w) > 0:
            raise PositiveDimensional(f"common factor {g.text()} leaves {u.name} free")
        return [], ()
    dw = max(gu.degree(w), 0), max(gw.degree(w), 0)
    if dw[0] == 0 and dw[1] == 0:
        g = poly_gcd(gu, gw)
        if g.degree(u) > 0:
            raise PositiveDimensional(f"common factor {g.text()} leaves {w.name} free")
        return [], ()

    residuals: list[str] = []
    elim = resultant(gu, gw, u)
    if elim.is_zero():
        raise PositiveDimensional(
            f"resultant in {u.name} vanishes identically: common curve component"
        )
    if elim.is_constant():
        return [], ()
    wroots = find_roots(elim, w)
    if not wroots.fully_split():
        residuals.append(f"eliminant residual in {w.name}: {wroots.residual.text()}")

    # group identical w-roots, remembering eliminant multiplicity
    grouped: dict[RationalFn, int] = {}
    for r in wroots.roots:
        grouped[r] = grouped.get(r, 0) + 1

    solutions = []
    for w0, wmult in grouped.items():
        gu0 = _substitute_root(gu, w, w0)
        gw0 = _substitute_root(gw, w, w0)
        if gu0.is_zero() and gw0.is_zero():
            raise PositiveDimensional(f"{w.name} = {w0.text()} leaves a free line")
        if gu0.is_zero() or gw0.is_zero():
            g = gw0 if gu0.is_zero() else gu0
        else:
            g = poly_gcd(gu0, gw0)
        if g.is_constant():
            continue  # spurious eliminant root
        uroots = find_roots(g, u)
        if not uroots.fully_split():
            residuals.append(
                f"{w.name} = {w0.text()}: residual in {u.name}: {uroots.residual.text()}"
            )
        ugrouped: dict[RationalFn, int] = {}
        for r in uroots.roots:
            ugrouped[r] = ugrouped.get(r, 0) + 1
        total_u = sum(ugrouped.values())
        for u0, umult in ugrouped.items():
            # distribute the eliminant multiplicity among the points above w0
            mult = max(1, (wmult * umult) // total_u) if total_u else 1
            solutions.append(({u: u0, w: w0}, mult))
    return solutions, tuple(residuals)


def _substitute_root(g: MultiPoly, sym: Symbol, value: RationalFn) -> MultiPoly:
    res = substitute(RationalFn.from_poly(g), {sym: value}, g.table)
    return res.num  # denominator is parameter-only and root-free


# -- linear part and local index ----------------------------------------------------


def boundary_first_order(chart: Chart, boundary: Symbol) -> tuple[Symbol, ...]:
    return (boundary,) + tuple(s for s in chart.vars if s != boundary)


def linear_part(v: VectorField, p: AccessiblePoint) -> list[list[RationalFn]]:
    """Degree-1 truncation of the boundary-scaled field at ``p``.

    The point is translated to the origin, every component is multiplied by
    the boundary variable, and the matrix of linear coefficients is returned
    in boundary-first variable order. Accessibility (vanishing constant part
    of the transverse rows) is re-verified on the way.
    """
    table = v.table
    chart = p.chart
    order = boundary_first_order(chart, p.boundary)
    shift = {
        s: RationalFn.var(table, s) + p.coord_of(s) for s in chart.vars
    }
    b = RationalFn.var(table, p.boundary)
    rows = []
    for sym in order:
        comp = v.components[chart.vars.index(sym)]
        centered = substitute(comp, shift, table)
        scaled = b * centered
        if not scaled.is_polynomial():
            from .errors import PoleTooHigh

            raise PoleTooHigh(
                f"{p.boundary.name} * d{sym.name}/dt is not polynomial at {p.text()}",
                component=sym.name,
                witness=scaled.den,
            )
        poly = scaled.as_poly()
        groups = poly.split_by_state_monomial()
        const_key = (0,) * len(table)
        if sym != p.boundary and const_key in groups:
            raise AssertionError(
                f"point {p.text()} is not accessible: d{sym.name}/dt has constant part "
                f"{groups[const_key].text()}"
            )
        row = []
        for col in order:
            key = [0] * len(table)
            key[table.index(col)] = 1
            coeff = groups.get(tuple(key))
            row.append(RationalFn.from_poly(coeff) if coeff is not None else RationalFn.const(table, 0))
        rows.append(row)
    return rows


@dataclass(frozen=True)
class LocalIndex:
    eigenvalues: tuple[RationalFn, RationalFn, RationalFn]
    ratios: tuple[RationalFn, RationalFn, RationalFn] | None
    integrality: tuple[bool, ...] | None
    ordering: str  # "permutation (i,j,k)" over boundary-first axes, or "spectral"

    def is_integral(self) -> bool | None:
        if self.integrality is None:
            return None
        return all(self.integrality)


def _triangular_permutation(A: list[list[RationalFn]]) -> tuple[int, ...] | None:
    n = len(A)
    for perm in itertools.permutations(range(n)):
        if all(A[perm[i]][perm[j]].is_zero() for i in range(n) for j in range(i + 1, n)):
            return perm
    return None


def local_index(v: VectorField, p: AccessiblePoint) -> LocalIndex:
    """Ordered eigenvalue tuple of the linear part, with resonance ratios.

    The order comes from a coordinate permutation making the linear part
    lower triangular (identity-first search, so the chart's own order wins
    when it already is triangular); if no permutation works the spectrum is
    computed from the characteristic polynomial and sorted canonically,
    flagged "spectral".
    """
    A = linear_part(v, p)
    table = v.table
    perm = _triangular_permutation(A)
    if perm is not None:
        eig = tuple(A[perm[k]][perm[k]] for k in range(3))
        ordering = f"permutation {perm}"
    else:
        eig = _spectrum(A, table)
        ordering = "spectral"
    a11 = eig[0]
    if a11.is_zero():
        ratios = None
        integrality = None
    else:
        ratios = (RationalFn.const(table, 1), eig[1] / a11, eig[2] / a11)
        integrality = tuple(r.is_integer() for r in ratios)
    return LocalIndex(eig, ratios, integrality, ordering)


def _spectrum(A: list[list[RationalFn]], table) -> tuple[RationalFn, ...]:
    lam_sym = table.get("eigvar")
    if lam_sym is None:
        ext = table.extend([parameter("eigvar")])
        A = [[e.retable(ext) for e in row] for row in A]
        lam_sym = ext.get("eigvar")
        work = ext
    else:
        work = table
    lam = RationalFn.var(work, lam_sym)
    m = [
        [lam - A[0][0], -A[0][1], -A[0][2]],
        [-A[1][0], lam - A[1][1], -A[1][2]],
        [-A[2][0], -A[2][1], lam - A[2][2]],
    ]
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    charpoly = det.num
    roots = find_roots(charpoly, lam_sym)
    if not roots.fully_split():
        raise UnresolvedSpectrum(
            f"characteristic polynomial does not split: residual {roots.residual.text()}"
        )
    eig = sorted(roots.roots, key=lambda r: r.text())
    return tuple(r.retable(table) for r in eig)


# -- scaling-limit (alpha) test ----------------------------------------------------------


@dataclass(frozen=True)
class AlphaTestReport:
    matrix: tuple[tuple, ...]
    triangular: bool
    ratios: tuple
    component_single_valued: tuple[bool, ...]
    log_detected: bool
    single_valued: bool


def classify_alpha_matrix(A) -> AlphaTestReport:
    """Single-valuedness classification of the constant-coefficient reduced
    system d(x_k)/dT = (sum_j a_kj x_j)/x_1.

    Component k is single-valued iff a_kk/a_11 is an integer; when
    a_kk == a_11 the explicit solution carries a logarithm unless the
    coupling a_k1 vanishes. Entries may be exact constants or rational
    functions of parameters, but every ratio must come out constant (else a
    specialization is required and ValueError is raised).
    """
    n = len(A)
    a11 = A[0][0]
    if a11.is_zero():
        raise ValueError("the scaling-limit classification needs a_11 != 0")
    lower = all(A[i][j].is_zero() for i in range(n) for j in range(i + 1, n))
    ratios = tuple(A[k][k] / a11 for k in range(n))
    for r in ratios:
        if isinstance(r, RationalFn) and not r.is_constant():
            raise ValueError(
                f"eigenvalue ratio {r.text()} depends on parameters; specialize them"
            )
    verdicts = []
    log_detected = False
    for k in range(1, n):
        ratio = ratios[k]
        ok = ratio.is_integer()
        if A[k][k] == a11 and not A[k][0].is_zero():
            ok = False
            log_detected = True
        verdicts.append(ok)
    return AlphaTestReport(
        matrix=tuple(tuple(row) for row in A),
        triangular=lower,
        ratios=ratios,
        component_single_valued=tuple(verdicts),
        log_detected=log_detected,
        single_valued=all(verdicts),
    )


def alpha_test(
    v: VectorField,
    p: AccessiblePoint,
    specialization: dict[Symbol, GaussianRational] | None = None,
) -> AlphaTestReport:
    """Scaling limit t = t0 + alpha*T, x = alpha*X at the point ``p``.

    The limit system is the linear part over x_1. Parameters may stay
    symbolic as long as the eigenvalue ratios are constant; otherwise pass
    an exact specialization.
    """
    A = linear_part(v, p)
    if specialization:
        A = [[e.specialize(specialization) for e in row] for row in A]
    return classify_alpha_matrix(A)


# -- dominant balance search ------------------------------------------------------------


@dataclass(frozen=True)
class Balance:
    exponents: tuple[int, int, int]
    coefficients: tuple[RationalFn, RationalFn, RationalFn]
    free: tuple[str, ...] = ()  # names of leading coefficients left free

    def text(self) -> str:
        coeffs = ", ".join(c.text() for c in self.coefficients)
        return f"orders {self.exponents} leading ({coeffs})"


LEAD_NAMES = ("lead1", "lead2", "lead3")


def painleve_leading_orders(v: VectorField, bound: int = 2) -> list[Balance]:
    """Search integer pole orders (m, n, p), |each| <= bound, max >= 1, with
    nonzero leading coefficients solving the dominant balance.

    The balance equations are polynomial in the three leading coefficients
    and are solved exactly by branching over :func:`find_roots`; zero roots
    are discarded (a vanishing leading coefficient is no balance), and
    coefficients that stay unconstrained are reported as free symbols.
    """
    if not v.is_polynomial():
        raise ValueError("dominant-balance search expects a polynomial field")
    table = v.table
    missing = [parameter(n) for n in LEAD_NAMES if table.get(n) is None]
    if missing:
        table = table.extend(missing)
    leads = tuple(table.get(n) for n in LEAD_NAMES)
    comps = [c.retable(table).as_poly() for c in v.components]
    state_idx = [table.index(s) for s in v.chart.vars]

    balances = []
    for orders in itertools.product(range(-bound, bound + 1), repeat=3):
        if max(orders) < 1:
            continue
        eqs = _balance_equations(comps, state_idx, leads, orders, table)
        if eqs is None:
            continue
        for branch in _solve_poly_system(eqs, leads, table):
            coeffs = tuple(branch.get(l, RationalFn.var(table, l)) for l in leads)
            if any(c.is_zero() for c in coeffs):
                continue
            free = tuple(l.name for l in leads if l not in branch)
            balances.append(Balance(tuple(orders), coeffs, free))
    return balances


def _balance_equations(comps, state_idx, leads, orders, table):
    """Equations forcing the ansatz x_k = L_k * tau^-m_k to balance at the
    lowest orders; None when the balance is impossible syntactically."""
    eqs = []
    for k, comp in enumerate(comps):
        buckets: dict[int, MultiPoly] = {}
        for e, c in comp.terms.items():
            o = -sum(e[idx] * m for idx, m in zip(state_idx, orders))
            term_exp = list(e)
            for idx in state_idx:
                term_exp[idx] = 0
            mono = MultiPoly(table, {tuple(term_exp): c})
            for j, idx in enumerate(state_idx):
                if e[idx]:
                    mono = mono * MultiPoly.var(table, leads[j]) ** e[idx]
            buckets[o] = buckets.get(o, MultiPoly.zero(table)) + mono
        m_k = orders[k]
        nu = -m_k - 1 if m_k != 0 else 0
        for o, poly in buckets.items():
            if o < nu and not poly.is_zero():
                eqs.append(poly)
        if m_k != 0:
            lead_term = MultiPoly.var(table, leads[k]) * m_k
            eqs.append(buckets.get(nu, MultiPoly.zero(table)) + lead_term)
    return eqs


def _solve_poly_system(eqs, unknowns, table) -> list[dict[Symbol, RationalFn]]:
    """All fully-resolved solution branches of a small polynomial system in
    ``unknowns`` over the parameter field; zero roots are pruned."""
    results: list[dict[Symbol, RationalFn]] = []

    def recurse(pending: list[MultiPoly], branch: dict[Symbol, RationalFn]):
        live = []
        for eq in pending:
            cur = eq
            if branch:
                cur = substitute(RationalFn.from_poly(eq), branch, table).num
            if cur.is_zero():
                continue
            if not any(s in unknowns for s in cur.variables()):
                return  # generically nonzero parameter constraint: dead branch
            live.append(cur)
        if not live:
            key = _resolve_branch(branch, table)
            if key not in results:
                results.append(key)
            return
        eq = min(live, key=lambda q: (len(q.variables()), q.total_degree()))
        sym = next(s for s in unknowns if s in eq.variables())
        roots = find_roots(eq, sym)
        rest = [q for q in live if q is not eq]
        seen = set()
        for r in roots.roots:
            if r.is_zero() or r in seen:
                continue
            seen.add(r)
            nb = dict(branch)
            nb[sym] = r
            recurse(rest, nb)

    recurse(list(eqs), {})
    return results


def _resolve_branch(branch: dict[Symbol, RationalFn], table) -> dict[Symbol, RationalFn]:
    """Back-substitute pinned values into each other (earlier pins may quote
    unknowns that were only solved later; the dependency graph is acyclic)."""
    for _ in range(len(branch) + 1):
        changed = False
        out = {}
        for s, val in branch.items():
            nv = substitute(val, branch, table)
            if nv != val:
                changed = True
            out[s] = nv
        branch = out
        if not changed:
            break
    return branch


def verify_balance(v: VectorField, balance: Balance) -> bool:
    """Exact re-check of a reported balance: the defining order-by-order
    equations, evaluated at the solved coefficients, must vanish identically
    (free coefficients stay symbolic and must cancel symbolically)."""
    table = v.table
    missing = [parameter(n) for n in LEAD_NAMES if table.get(n) is None]
    if missing:
        table = table.extend(missing)
    leads = tuple(table.get(n) for n in LEAD_NAMES)
    comps = [c.retable(table).as_poly() for c in v.components]
    state_idx = [table.index(s) for s in v.chart.vars]
    eqs = _balance_equations(comps, state_idx, leads, balance.exponents, table)
    bindings = {
        leads[k]: balance.coefficients[k].retable(table) for k in range(3)
    }
    for eq in eqs:
        if not substitute(RationalFn.from_poly(eq), bindings, table).is_zero():
            return False
    return True


# -- blow-ups ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowUpChart:
    cmap: ChartMap
    field: VectorField
    exceptional: Symbol
    direction: Symbol  # source variable giving this directional chart


def blow_up(
    v: VectorField,
    center_point: AccessiblePoint | None = None,
    shifts: Sequence[RationalFn] | None = None,
    center: Sequence[RationalFn] | None = None,
    level: int | None = None,
) -> list[BlowUpChart]:
    """Point blow-up of ``v.chart`` at a center, one chart per direction.

    The center is ``center_point.coords`` (plus optional ``shifts``) or an
    explicit coordinate triple. In the direction-k chart the k-th new
    variable is the shifted old one and the others are divided by it; each
    chart comes with its verified ChartMap and the pushed-forward field.
    """
    table = v.table
    chart = v.chart
    if center is None:
        if center_point is None:
            raise ValueError("need a center point or explicit center coordinates")
        center = list(center_point.coords)
        if shifts is not None:
            center = [c + s for c, s in zip(center, shifts)]
    center = [c if isinstance(c, RationalFn) else RationalFn.const(table, c) for c in center]

    if level is None:
        level = 1
        while table.get(f"bu{level}_1") is not None:
            level += 1
    names = [f"bu{level}_{j + 1}" for j in range(3)]
    new_syms = tuple(Symbol(n, "state") for n in names)
    new_table = table.extend(new_syms)
    vv = v.retable(new_table)
    center = [c.retable(new_table) for c in center]

    out = []
    for k in range(3):
        tvars = tuple(new_table.get(n) for n in names)
        target = Chart(f"{chart.name}.b{level}{chart.vars[k].name}", tvars, boundary=tvars[k])
        fwd = []
        base_k = RationalFn.var(new_table, chart.vars[k]) - center[k]
        for j in range(3):
            if j == k:
                fwd.append(base_k)
            else:
                fwd.append((RationalFn.var(new_table, chart.vars[j]) - center[j]) / base_k)
        inv = []
        dk = RationalFn.var(new_table, tvars[k])
        for j in range(3):
            if j == k:
                inv.append(dk + center[k])
            else:
                inv.append(dk * RationalFn.var(new_table, tvars[j]) + center[j])
        cmap = ChartMap(chart, target, fwd, inv)
        out.append(
            BlowUpChart(
                cmap=cmap,
                field=pushforward(vv, cmap),
                exceptional=tvars[k],
                direction=chart.vars[k],
            )
        )
    return out


# -- holomorphy obstructions ----------------------------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    """Parameter conditions equivalent to polynomiality of a blown-up field."""

    conditions: tuple[MultiPoly, ...]  # monic, deduplicated, sorted by text

    def is_empty(self) -> bool:
        return not self.conditions

    def texts(self) -> list[str]:
        return [c.text() for c in self.conditions]


def holomorphy_obstructions(v: VectorField, exceptional: Symbol) -> Obstruction:
    """Coefficients of the negative powers of the exceptional variable.

    Each reduced component must have a denominator that is a pure power of
    the exceptional variable (guaranteed for fields produced by the blow-up
    pipeline); the parameter-polynomial coefficients of all negative powers
    are collected, normalized monic, and deduplicated. An empty condition
    set means the field is already polynomial.
    """
    table = v.table
    k_exc = table.index(exceptional)
    conditions: dict[str, MultiPoly] = {}
    for comp in v.components:
        if comp.is_polynomial():
            continue
        den = comp.den
        if not den.is_monomial():
            raise ValueError(
                f"component denominator {den.text()} is not a power of {exceptional.name}"
            )
        ((dexp, _),) = den.terms.items()
        if any(dexp[j] for j in range(len(dexp)) if j != k_exc):
            raise ValueError(
                f"component has a pole along {den.text()}, not only along {exceptional.name}"
            )
        order = dexp[k_exc]
        low_terms = {e: c for e, c in comp.num.terms.items() if e[k_exc] < order}
        if not low_terms:
            continue
        low = MultiPoly(table, low_terms)
        for param_poly in low.split_by_state_monomial().values():
            normalized = param_poly.monic()
            conditions[normalized.text()] = normalized
    ordered = tuple(conditions[k] for k in sorted(conditions))
    return Obstruction(ordered)


# -- parameter condition solving ----------------------------------------------------------------


@dataclass(frozen=True)
class ConditionBranch:
    """One solution branch: parameters pinned to exact values; unpinned
    parameters are free; non-splitting factors stay as residual constraints."""

    pinned: tuple[tuple[Symbol, RationalFn], ...]
    residuals: tuple[MultiPoly, ...] = ()

    def as_dict(self) -> dict[Symbol, RationalFn]:
        return dict(self.pinned)

    def text(self) -> str:
        parts = [f"{s.name} = {v.text()}" for s, v in self.pinned]
        parts += [f"{r.text()} = 0" for r in self.residuals]
        return "{" + ", ".join(parts) + "}" if parts else "{all parameters free}"


def solve_parameter_conditions(conditions: Sequence[MultiPoly]) -> list[ConditionBranch]:
    """Solution set of simultaneous parameter equations, as maximal branches.

    Conditions are split into monomial factors and exact roots of univariate
    factors; branches that are specializations of other branches are dropped,
    so the answer is the minimal covering family.
    """
    if not conditions:
        return [ConditionBranch(())]
    table = conditions[0].table
    branches: list[tuple[dict[Symbol, RationalFn], list[MultiPoly]]] = [({}, [])]
    for cond in conditions:
        new_branches = []
        for pins, resid in branches:
            cur = cond
            if pins:
                cur = substitute(RationalFn.from_poly(cond), pins, table).num
            if cur.is_zero():
                new_branches.append((pins, resid))
                continue
            if cur.is_constant():
                continue  # contradiction: branch dies
            for extra_pin, extra_resid in _split_condition(cur, table):
                np = dict(pins)
                conflict = False
                if extra_pin is not None:
                    s, val = extra_pin
                    if s in np and np[s] != val:
                        conflict = True
                    else:
                        np[s] = val
                if not conflict:
                    new_branches.append((np, resid + extra_resid))
        branches = new_branches
    # drop branches subsumed by a more general one
    out = []
    items = [
        ConditionBranch(tuple(sorted(p.items(), key=lambda kv: kv[0].name)), tuple(r))
        for p, r in branches
    ]
    seen = set()
    uniq = []
    for b in items:
        key = b.text()
        if key not in seen:
            seen.add(key)
            uniq.append(b)
    for b in uniq:
        subsumed = False
        for other in uniq:
            if other is b:
                continue
            if set(other.pinned) <= set(b.pinned) and set(other.residuals) <= set(b.residuals):
                if (set(other.pinned), set(other.residuals)) != (set(b.pinned), set(b.residuals)):
                    subsumed = True
                    break
        if not subsumed:
            out.append(b)
    return sorted(out, key=lambda b: b.text())


@dataclass(frozen=True)
class ResolutionReport:
    """End-to-end record of resolving the multiple boundary point."""

    balance: Balance
    weighted_points: tuple[tuple[AccessiblePoint, LocalIndex], ...]
    entry_point: AccessiblePoint
    centers: tuple[AccessiblePoint, ...]
    obstruction: Obstruction
    branches: tuple[ConditionBranch, ...]
    final_field: VectorField
    final_exceptional: Symbol
    chart_maps: tuple[ChartMap, ...] = ()  # weighted map, then one map per blow-up

    def composed_map(self) -> ChartMap:
        """The single birational map from the base chart to the final chart."""
        table = self.final_field.table
        maps = [
            ChartMap(
                m.source,
                m.target,
                [f.retable(table) for f in m.forward],
                [g.retable(table) for g in m.inverse],
                check=False,
            )
            for m in self.chart_maps
        ]
        out = maps[0]
        for m in maps[1:]:
            out = out.compose(m)
        return out


def resolution_pipeline(
    v: VectorField,
    weighted_map_factory,
    steps: int | None = None,
    bound: int = 2,
) -> ResolutionReport:
    """Resolve the degenerate boundary point of ``v`` and read off the
    parameter conditions for polynomiality.

    The dominant balance with a pole in the first variable selects the
    weighted chart (``weighted_map_factory`` maps its pole orders to a
    ChartMap); the accessible point there with a nonzero first index entry
    is blown up repeatedly (the resonance ratio fixes the number of steps),
    each time at the unique accessible point of the exceptional divisor,
    following the exceptional direction. The final field's holomorphy
    obstructions and their solution branches are returned.
    """
    balances = [b for b in painleve_leading_orders(v, bound) if b.exponents[0] >= 1]
    if not balances:
        raise ValueError("no dominant balance with a pole in the first variable")
    balance = max(balances, key=lambda b: sum(b.exponents))
    weighted_map = weighted_map_factory(balance.exponents)
    vw = pushforward(v, weighted_map)
    scan = find_accessible(vw)
    decorated = tuple((p, local_index(vw, p)) for p in scan.points)
    entries = [(p, ix) for p, ix in decorated if not ix.eigenvalues[0].is_zero()]
    if not entries:
        raise ValueError("no accessible point with nonzero leading index on the weighted chart")
    entry, entry_index = entries[0]
    if steps is None:
        steps = 1
        if entry_index.ratios is not None:
            for r in entry_index.ratios[1:]:
                if r.is_integer():
                    steps = max(steps, int(r.constant_value().re))
    current_field, current_point = vw, entry
    centers = []
    chart_maps = [weighted_map]
    exceptional = None
    for step in range(steps):
        charts = blow_up(current_field, current_point)
        nxt = next(c for c in charts if c.direction == current_field.chart.boundary)
        current_field = nxt.field
        exceptional = nxt.exceptional
        chart_maps.append(nxt.cmap)
        if step < steps - 1:
            inner = find_accessible(current_field, exceptional)
            if len(inner) != 1:
                raise ValueError(
                    f"expected a unique accessible point on the exceptional divisor, got "
                    f"{[p.text() for p in inner.points]}"
                )
            current_point = inner.points[0]
            centers.append(current_point)
    obstruction = holomorphy_obstructions(current_field, exceptional)
    branches = tuple(solve_parameter_conditions(list(obstruction.conditions)))
    return ResolutionReport(
        balance=balance,
        weighted_points=decorated,
        entry_point=entry,
        centers=tuple(centers),
        obstruction=obstruction,
        branches=branches,
        final_field=current_field,
        final_exceptional=exceptional,
        chart_maps=tuple(chart_maps),
    )


def _split_condition(cond: MultiPoly, table):
    """Factor one parameter polynomial into branch alternatives.

    Yields (pin, residuals) pairs: a pinned assignment like gamma = -1, or
    None with the unfactorable remainder as a residual constraint.
    """
    alternatives = []
    mins = None
    for e in cond.terms:
        mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
    core = cond
    if any(mins):
        core = MultiPoly(table, {tuple(a - b for a, b in zip(e, mins)): c for e, c in cond.terms.items()})
        for k, d in enumerate(mins):
            if d:
                sym = table.symbols[k]
                alternatives.append(((sym, RationalFn.const(table, 0)), []))
    if not core.is_constant():
        vs = core.variables()
        if len(vs) == 1:
            sym = vs[0]
            rr = find_roots(core, sym)
            for r in rr.roots:
                alternatives.append(((sym, r), []))
            if not rr.fully_split():
                alternatives.append((None, [rr.residual]))
        else:
            alternatives.append((None, [core.monic()]))
    return alternatives
