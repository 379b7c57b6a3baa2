from fractions import Fraction

import pytest

from threewave import models
from threewave.errors import PositiveDimensional
from threewave.gaussian import gr
from threewave.geometry import Chart, VectorField, pushforward
from threewave.poly import MultiPoly
from threewave.ratfunc import RationalFn, substitute
from threewave.singular import (
    alpha_test,
    blow_up,
    classify_alpha_matrix,
    find_accessible,
    holomorphy_obstructions,
    linear_part,
    local_index,
    painleve_leading_orders,
    resolution_pipeline,
    solve_parameter_conditions,
    verify_balance,
)
from threewave.symbols import table


def _chart_field(kind, chart_name, params=None):
    if chart_name == "W":
        cmap = models.weighted_chart_map(kind, (1, 0, 2))
    else:
        cmap = next(m for m in models.projective_atlas(kind) if m.target.name == chart_name)
    v = models.model(kind).fields["U0"]
    if params is not None:
        v = models.bind_field(v, models.bind_parameters(kind, params))
    return pushforward(v, cmap)


# -- accessible points ---------------------------------------------------------


def test_accessible_points_reciprocal_chart():
    w = _chart_field("three-wave", "U1")
    scan = find_accessible(w)
    got = {p.text() for p in scan.points}
    assert got == {"(0, 0, 0)", "(0, i, 0)", "(0, -i, 0)"}
    assert scan.residuals == ()


def test_accessible_points_weighted_chart():
    w = _chart_field("three-wave", "W")
    scan = find_accessible(w)
    got = {p.text() for p in scan.points}
    assert got == {"(0, 1/2*delta, 0)", "(0, 1/2*delta, -1)"}


def test_accessible_point_multiplicity_four():
    w = _chart_field("three-wave", "U3")
    scan = find_accessible(w)
    assert len(scan.points) == 1
    p = scan.points[0]
    assert p.text() == "(0, 0, 0)"
    assert p.multiplicity == 4


def test_zero_field_positive_dimensional():
    t = table("X", "Y", "Z")
    chart = Chart("C", (t.get("X"), t.get("Y"), t.get("Z")), boundary=t.get("X"))
    zero = RationalFn.const(t, 0)
    v = VectorField(chart, [zero, zero, zero])
    with pytest.raises(PositiveDimensional):
        find_accessible(v)


def test_every_reported_point_satisfies_definition():
    # transverse log-pole parts vanish exactly at every reported point
    for chart_name in ("U1", "U2", "U3", "W"):
        w = _chart_field("three-wave", chart_name)
        from threewave.geometry import log_pole_decomposition

        lp = log_pole_decomposition(w, w.chart.boundary)
        zero = {w.table.get(w.chart.boundary.name): gr(0)}
        for p in find_accessible(w).points:
            bindings = {s: p.coords[k] for k, s in enumerate(p.chart.vars)}
            for _, g in lp.transverse:
                val = substitute(RationalFn.from_poly(g.specialize(zero)), bindings, w.table)
                assert val.is_zero()


# -- linear part / local index ----------------------------------------------------


def _named(kind="three-wave", params=None):
    from threewave.reports import named_points

    return named_points(kind, params)


def test_linear_part_matches_tables():
    pts = _named()
    v, p1 = pts["P1"]
    A = linear_part(v, p1)
    diag = [A[k][k].text() for k in range(3)]
    assert diag == ["0", "2", "-2"]
    v, p42 = pts["P4_2"]
    A = linear_part(v, p42)
    assert [A[k][k].text() for k in range(3)] == ["1", "2", "2"]
    # sub-diagonal couplings from the expansion at the degenerate point
    assert A[1][0].text() == "1/2*delta*gamma"
    assert A[2][0].text() == "2*gamma+2"


def test_local_index_table():
    pts = _named()
    expected = {
        "P1": ("0", "2", "-2"),
        "P2": ("-2", "-4", "-4"),
        "P3": ("-2", "-4", "-4"),
        "P4_1": ("0", "2", "-2"),
        "P4_2": ("1", "2", "2"),
    }
    for name, eig in expected.items():
        v, p = pts[name]
        idx = local_index(v, p)
        assert tuple(e.text() for e in idx.eigenvalues) == eig, name


def test_local_index_ratios_and_integrality():
    pts = _named()
    v, p2 = pts["P2"]
    idx = local_index(v, p2)
    assert tuple(r.text() for r in idx.ratios) == ("1", "2", "2")
    assert idx.is_integral()
    v, p41 = pts["P4_1"]
    idx41 = local_index(v, p41)
    assert idx41.ratios is None and idx41.integrality is None


def test_trace_determinant_invariants():
    pts = _named()
    for name, (v, p) in pts.items():
        if name == "P4":  # multiplicity-4 point is analyzed on the weighted chart
            continue
        A = linear_part(v, p)
        idx = local_index(v, p)
        tr = A[0][0] + A[1][1] + A[2][2]
        assert tr == idx.eigenvalues[0] + idx.eigenvalues[1] + idx.eigenvalues[2]
        det = (
            A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
        )
        assert det == idx.eigenvalues[0] * idx.eigenvalues[1] * idx.eigenvalues[2]


def test_index_invariant_under_transverse_permutation():
    # eigenvalue multiset survives permuting the non-boundary coordinates
    pts = _named()
    v, p = pts["P2"]
    idx = local_index(v, p)
    multiset = sorted(e.text() for e in idx.eigenvalues)
    swapped_chart = Chart(p.chart.name, (p.chart.vars[0], p.chart.vars[2], p.chart.vars[1]), p.chart.boundary)
    swapped_field = VectorField(swapped_chart, (v.components[0], v.components[2], v.components[1]))
    from threewave.singular import AccessiblePoint

    swapped_point = AccessiblePoint(swapped_chart, (p.coords[0], p.coords[2], p.coords[1]), p.boundary)
    idx2 = local_index(swapped_field, swapped_point)
    assert sorted(e.text() for e in idx2.eigenvalues) == multiset


# -- alpha test ---------------------------------------------------------------------


def test_alpha_test_at_degenerate_point():
    pts = _named()
    v, p = pts["P4_2"]
    rep = alpha_test(v, p)
    assert tuple(r.text() for r in rep.ratios) == ("1", "2", "2")
    assert rep.single_valued


def test_alpha_toy_non_integer_ratio():
    t = table("a:parameter")
    half = RationalFn.const(t, gr(Fraction(1, 2)))
    one = RationalFn.const(t, 1)
    zero = RationalFn.const(t, 0)
    rep = classify_alpha_matrix([[one, zero, zero], [zero, half, zero], [zero, zero, one]])
    assert not rep.component_single_valued[0]
    assert not rep.single_valued


def test_alpha_toy_logarithm_from_equal_eigenvalues():
    t = table("a:parameter")
    one = RationalFn.const(t, 1)
    zero = RationalFn.const(t, 0)
    rep = classify_alpha_matrix([[one, zero], [one, one]])
    assert rep.log_detected and not rep.single_valued
    # with vanishing coupling the logarithm disappears
    rep2 = classify_alpha_matrix([[one, zero], [zero, one]])
    assert not rep2.log_detected and rep2.single_valued


# -- dominant balances -----------------------------------------------------------------


def test_painleve_orders_for_three_wave():
    v = models.three_wave_system()
    balances = painleve_leading_orders(v, 2)
    by_orders = {b.exponents for b in balances}
    assert (1, 0, 2) in by_orders
    main = next(b for b in balances if b.exponents == (1, 0, 2))
    assert tuple(c.text() for c in main.coefficients) == ("1", "1/2*delta", "-1")
    for b in balances:
        assert verify_balance(v, b)


def test_painleve_riccati_toy():
    t = table("x", "y", "z")
    chart = Chart("C", (t.get("x"), t.get("y"), t.get("z")))
    x = RationalFn.var(t, "x")
    zero = RationalFn.const(t, 0)
    v = VectorField(chart, [x * x, zero, zero])
    balances = painleve_leading_orders(v, 1)
    assert any(
        b.exponents[0] == 1 and b.coefficients[0].text() == "-1" for b in balances
    )


def test_painleve_linear_system_has_no_balance():
    t = table("x", "y", "z")
    chart = Chart("C", (t.get("x"), t.get("y"), t.get("z")))
    x, y, z = (RationalFn.var(t, n) for n in ("x", "y", "z"))
    v = VectorField(chart, [x, 2 * y, -z])
    assert painleve_leading_orders(v, 2) == []


# -- blow-ups ---------------------------------------------------------------------------


def test_blow_up_directional_charts():
    w = _chart_field("three-wave", "W")
    scan = find_accessible(w)
    target = next(p for p in scan.points if p.coords[2].text() == "-1")
    charts = blow_up(w, target)
    assert len(charts) == 3
    assert len({c.cmap.target.name for c in charts}) == 3
    boundary_dir = next(c for c in charts if c.direction == w.chart.boundary)
    # in the boundary direction the first new variable is the old boundary itself
    fwd = boundary_dir.cmap.forward
    big = fwd[0].table
    assert fwd[0] == RationalFn.var(big, "XW")
    assert boundary_dir.exceptional == boundary_dir.cmap.target.boundary


def test_blow_up_of_zero_field_is_zero():
    t = table("X", "Y", "Z")
    chart = Chart("C", (t.get("X"), t.get("Y"), t.get("Z")), boundary=t.get("X"))
    zero = RationalFn.const(t, 0)
    v = VectorField(chart, [zero, zero, zero])
    center = [RationalFn.const(t, 0)] * 3
    for piece in blow_up(v, center=center):
        assert all(c.is_zero() for c in piece.field.components)


def test_blow_up_map_round_trip_numeric():
    w = _chart_field("three-wave", "W", params=[3, 2])
    scan = find_accessible(w)
    target = next(p for p in scan.points if p.coords[2].text() == "-1")
    piece = blow_up(w, target)[0]
    cmap = piece.cmap
    pt = {s.name: v for s, v in zip(cmap.source.vars, (0.37 + 0.1j, 1.9, -0.55))}
    img = {s.name: f.eval_complex(pt) for s, f in zip(cmap.target.vars, cmap.forward)}
    back = [g.eval_complex(img) for g in cmap.inverse]
    for name, value in zip(("XW", "YW", "ZW"), back):
        assert abs(value - pt[name]) < 1e-12


# -- obstructions ------------------------------------------------------------------------


def test_pipeline_reproduces_conditions():
    v = models.three_wave_system()
    rep = resolution_pipeline(v, lambda e: models.weighted_chart_map("three-wave", e))
    assert rep.obstruction.texts() == ["delta*gamma", "gamma^2+gamma"]
    assert [b.text() for b in rep.branches] == ["{delta = 0, gamma = -1}", "{gamma = 0}"]
    assert [c.text() for c in rep.centers] == ["(0, -1/2*delta*gamma, -2*gamma-2)"]


def test_pipeline_composed_chart_equals_resolved_chart_three():
    # two independent routes to the same coordinate change: the weighted
    # chart followed by the two blow-ups composes to the atlas's third
    # twisted chart, up to flipping the sign of the middle coordinate
    v = models.three_wave_system()
    rep = resolution_pipeline(v, lambda e: models.weighted_chart_map("three-wave", e))
    composed = rep.composed_map()
    big = rep.final_field.table
    t23 = next(m for m in models.resolved_atlas("three-wave") if m.target.name == "T2-3")
    expected = [f.retable(big) for f in t23.forward]
    assert composed.forward[0] == expected[0]
    assert composed.forward[1] == -expected[1]
    assert composed.forward[2] == expected[2]
    # and the final pipeline field is the T2-3 pushforward seen through that sign flip
    w23 = pushforward(models.three_wave_system(), t23)
    renames = dict(zip((s.name for s in w23.chart.vars), rep.final_field.chart.vars))
    # compare componentwise after mapping (x3, y3, z3) -> (u, -v, w)
    bindings = {}
    for old, new in renames.items():
        expr = RationalFn.var(big, new)
        if old == "y3":
            expr = -expr
        bindings[big.get(old)] = expr
    moved = [substitute(c.retable(big), bindings, big) for c in w23.components]
    final = list(rep.final_field.components)
    assert final[0] == moved[0]
    assert final[1] == -moved[1]
    assert final[2] == moved[2]


def test_pipeline_modified_system_resolves_cleanly():
    v = models.modified_system()
    rep = resolution_pipeline(v, lambda e: models.weighted_chart_map("modified", e))
    assert rep.obstruction.is_empty()


def test_obstruction_specialization_both_directions():
    # the pipeline runs on symbolic parameters; specializing its final field
    # at values satisfying the conditions must give polynomials, and values
    # violating them must leave a genuine pole
    v = models.three_wave_system()
    rep = resolution_pipeline(v, lambda e: models.weighted_chart_map("three-wave", e))
    table = rep.final_field.table
    d, g = table.get("delta"), table.get("gamma")

    for good in ({d: gr(0), g: gr(-1)}, {d: gr(5), g: gr(0)}):
        spec = rep.final_field.specialize(good)
        assert all(c.is_polynomial() for c in spec.components), good
    bad = rep.final_field.specialize({d: gr(1), g: gr(1)})
    assert any(not c.is_polynomial() for c in bad.components)


def test_already_polynomial_field_has_no_obstructions():
    t = table("u", "v", "w", "delta:parameter")
    chart = Chart("C", (t.get("u"), t.get("v"), t.get("w")), boundary=t.get("u"))
    u, v_, w_ = (RationalFn.var(t, n) for n in ("u", "v", "w"))
    field = VectorField(chart, [u * v_, v_ + w_, u])
    obs = holomorphy_obstructions(field, t.get("u"))
    assert obs.is_empty()


def test_solve_parameter_conditions_branches():
    t = table("delta:parameter", "gamma:parameter")
    d, g = MultiPoly.var(t, "delta"), MultiPoly.var(t, "gamma")
    branches = solve_parameter_conditions([d * g, g * g + g])
    assert [b.text() for b in branches] == ["{delta = 0, gamma = -1}", "{gamma = 0}"]


def test_solve_parameter_conditions_contradiction_dies():
    t = table("delta:parameter")
    d = MultiPoly.var(t, "delta")
    one = MultiPoly.const(t, 1)
    # delta = 0 together with delta - 1 = 0 has no solution
    branches = solve_parameter_conditions([d, d - one])
    assert branches == []
