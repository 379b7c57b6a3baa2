"""JSON-ready report builders shared by the CLI and the test suite.

Everything here returns plain dicts of strings/numbers/lists in canonical
text form, so serializing with sorted keys gives byte-identical output for
identical inputs.
"""

from __future__ import annotations

from typing import Sequence

from . import models
from .geometry import VectorField, jacobian_determinant, pushforward
from .ratfunc import RationalFn
from .singular import (
    AccessiblePoint,
    AccessibleScan,
    alpha_test,
    find_accessible,
    linear_part,
    local_index,
    resolution_pipeline,
)

PROJECTIVE_CHARTS = ("U1", "U2", "U3")


def _point_dict(p: AccessiblePoint) -> dict:
    return {
        "chart": p.chart.name,
        "coords": [c.text() for c in p.coords],
        "boundary": p.boundary.name,
        "multiplicity": p.multiplicity,
    }


def homogeneous_key(p: AccessiblePoint) -> str:
    """Canonical projective representative [z0:z1:z2:z3] for U1/U2/U3 points."""
    table = p.coords[0].table
    one = RationalFn.const(table, 1)
    a, b, c = p.coords
    if p.chart.name == "U1":
        coords = [a, one, b, c]
    elif p.chart.name == "U2":
        coords = [b, a, one, c]
    elif p.chart.name == "U3":
        coords = [c, a, b, one]
    else:
        raise ValueError(f"chart {p.chart.name} is not projective")
    pivot = next(x for x in coords if not x.is_zero())
    return "[" + " : ".join((x / pivot).text() for x in coords) + "]"


def scan_chart(kind: str, params, chart_name: str) -> tuple[VectorField, AccessibleScan]:
    if chart_name == "W":
        cmap = models.weighted_chart_map(kind, (1, 0, 2))
    else:
        cmap = next(m for m in models.projective_atlas(kind) if m.target.name == chart_name)
    bindings = models.bind_parameters(kind, params)
    system = models.model(kind).fields["U0"]
    if bindings:
        system = models.bind_field(system, bindings)
    w = pushforward(system, cmap)
    return w, find_accessible(w)


def singularities_report(kind: str, params=None, charts: Sequence[str] | None = None) -> dict:
    """Accessible points per chart, plus the deduplicated projective census."""
    charts = tuple(charts) if charts else PROJECTIVE_CHARTS + ("W",)
    per_chart = {}
    census: dict[str, dict] = {}
    for name in charts:
        field_w, scan = scan_chart(kind, params, name)
        per_chart[name] = {
            "points": [_point_dict(p) for p in scan.points],
            "residual_branches": list(scan.residuals),
        }
        if name in PROJECTIVE_CHARTS:
            for p in scan.points:
                key = homogeneous_key(p)
                entry = census.setdefault(
                    key, {"projective": key, "seen_in": [], "multiplicity": 0}
                )
                entry["seen_in"].append(p.chart.name)
                entry["multiplicity"] = max(entry["multiplicity"], p.multiplicity)
    distinct = sorted(census.values(), key=lambda e: e["projective"])
    total_mult = sum(e["multiplicity"] for e in distinct)
    return {
        "system": kind,
        "charts": per_chart,
        "projective_census": distinct,
        "distinct_boundary_points": len(distinct),
        "count_with_multiplicity": total_mult,
    }


def named_points(kind: str, params=None) -> dict[str, tuple[VectorField, AccessiblePoint]]:
    """The classical labels: P1..P3 on U1, P4 on U3, P4_1/P4_2 on the
    weighted chart, matched by computed coordinates (never hardcoded)."""
    out = {}
    vu1, scan1 = scan_chart(kind, params, "U1")
    zeros = [p for p in scan1.points if all(c.is_zero() for c in p.coords)]
    others = [p for p in scan1.points if p not in zeros]
    if zeros:
        out["P1"] = (vu1, zeros[0])
    # sort the pair off the origin by the sign of the imaginary part (i first)
    others.sort(key=lambda p: p.coords[1].text(), reverse=True)
    for label, p in zip(("P2", "P3"), others):
        out[label] = (vu1, p)
    vu3, scan3 = scan_chart(kind, params, "U3")
    for p in scan3.points:
        if all(c.is_zero() for c in p.coords):
            out["P4"] = (vu3, p)
    vw, scanw = scan_chart(kind, params, "W")
    for p in scanw.points:
        label = "P4_1" if p.coords[2].is_zero() else "P4_2"
        out[label] = (vw, p)
    return out


def index_report(kind: str, params=None, point: str = "P1") -> dict:
    registry = named_points(kind, params)
    if point not in registry:
        raise KeyError(f"unknown point {point!r}; known: {sorted(registry)}")
    v, p = registry[point]
    A = linear_part(v, p)
    idx = local_index(v, p)
    return {
        "point": point,
        "chart": p.chart.name,
        "coords": [c.text() for c in p.coords],
        "linear_part": [[e.text() for e in row] for row in A],
        "eigenvalues": [e.text() for e in idx.eigenvalues],
        "ratios": [r.text() for r in idx.ratios] if idx.ratios else None,
        "integrality": list(idx.integrality) if idx.integrality else None,
        "ordering": idx.ordering,
        "obstructions": [],
    }


def alpha_report(kind: str, params=None, point: str = "P4_2", specialization=None) -> dict:
    registry = named_points(kind, params)
    v, p = registry[point]
    rep = alpha_test(v, p, specialization)
    return {
        "point": point,
        "chart": p.chart.name,
        "matrix": [[c.text() for c in row] for row in rep.matrix],
        "triangular": rep.triangular,
        "ratios": [c.text() for c in rep.ratios],
        "component_single_valued": list(rep.component_single_valued),
        "log_detected": rep.log_detected,
        "single_valued": rep.single_valued,
    }


def painleve_report(kind: str, params=None, bound: int = 2) -> dict:
    bindings = models.bind_parameters(kind, params)
    system = models.model(kind).fields["U0"]
    if bindings:
        system = models.bind_field(system, bindings)
    from .singular import painleve_leading_orders, verify_balance

    balances = painleve_leading_orders(system, bound)
    return {
        "system": kind,
        "bound": bound,
        "balances": [
            {
                "exponents": list(b.exponents),
                "coefficients": [c.text() for c in b.coefficients],
                "free": list(b.free),
                "verified": verify_balance(system, b),
            }
            for b in balances
        ],
    }


def pipeline_report(kind: str, params=None, bound: int = 2) -> dict:
    bindings = models.bind_parameters(kind, params)
    system = models.model(kind).fields["U0"]
    if bindings:
        system = models.bind_field(system, bindings)
    rep = resolution_pipeline(
        system, lambda exps: models.weighted_chart_map(kind, exps), bound=bound
    )
    return {
        "system": kind,
        "balance": {
            "exponents": list(rep.balance.exponents),
            "coefficients": [c.text() for c in rep.balance.coefficients],
        },
        "weighted_points": [
            {
                "point": _point_dict(p),
                "eigenvalues": [e.text() for e in ix.eigenvalues],
                "ratios": [r.text() for r in ix.ratios] if ix.ratios else None,
            }
            for p, ix in rep.weighted_points
        ],
        "entry_point": _point_dict(rep.entry_point),
        "blowup_centers": [_point_dict(c) for c in rep.centers],
        "chart_lineage": [m.target.name for m in rep.chart_maps],
        "composed_forward": [f.text() for f in rep.composed_map().forward],
        "final_chart": rep.final_field.chart.name,
        "final_components": [c.text() for c in rep.final_field.components],
        "obstructions": rep.obstruction.texts(),
        "solution_branches": [b.text() for b in rep.branches],
        "resolvable_without_conditions": rep.obstruction.is_empty(),
    }


def atlas_report(kind: str, params=None, atlas_name: str = "resolved") -> dict:
    bindings = models.bind_parameters(kind, params)
    system = models.model(kind).fields["U0"]
    if bindings:
        system = models.bind_field(system, bindings)
    if atlas_name == "resolved":
        atlas = models.resolved_atlas(kind, params)
    elif atlas_name == "projective":
        atlas = models.projective_atlas(kind)
    else:
        raise KeyError(f"unknown atlas {atlas_name!r}")
    verdicts = models.verify_atlas_holomorphy(system, atlas)
    jacobians = [
        {"chart": m.target.name, "jacobian_determinant": jacobian_determinant(m).text()}
        for m in atlas
    ]
    return {
        "system": kind,
        "atlas": atlas_name,
        "charts": verdicts,
        "jacobians": jacobians,
        "all_polynomial": all(d["polynomial"] for d in verdicts),
        "all_unit_jacobian": all(j["jacobian_determinant"] == "1" for j in jacobians),
    }


def symmetry_report(which: str = "both") -> dict:
    gens = models.symmetry_generators()
    system = models.modified_system()
    out: dict = {"system": "modified"}
    if which in ("pi", "both"):
        out["pi"] = models.verify_symmetry(system, gens["pi"])
    if which in ("s", "both"):
        out["s"] = models.verify_symmetry(system, gens["s"])
    out["relations"] = models.verify_group_relations(gens)
    checked = [out[k]["invariant"] for k in ("pi", "s") if k in out]
    out["all_invariant"] = all(checked)
    return out


def uniqueness_report() -> dict:
    from .uniqueness import build_constraints, solve_ansatz

    cs = build_constraints()
    rep = solve_ansatz(cs)
    diff = None
    if rep.recovered is not None:
        reference = models.modified_system()
        table = rep.recovered.table
        diff = [
            (rep.recovered.components[k] - reference.components[k].retable(table)).text()
            for k in range(3)
        ]
    return {
        "constraints": rep.constraints,
        "homogeneous_rank": rep.homogeneous_rank,
        "homogeneous_nullity": rep.homogeneous_nullity,
        "normalized_consistent": rep.solution.consistent,
        "normalized_nullity": rep.solution.nullity,
        "matches_reference": rep.matches_reference,
        "quadratic_part_nonzero": rep.quadratic_part_nonzero,
        "recovered": [c.text() for c in rep.recovered.components] if rep.recovered else None,
        "diff_against_reference": diff,
    }
