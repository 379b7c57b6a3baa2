"""Command-line front end.

Every analysis is a subcommand producing a deterministic report (canonical
term order, sorted JSON keys, no timestamps), so identical inputs give
byte-identical output. Exit codes: 0 all checks passed, 1 a verification
failed (the report carries the witness), 2 usage or input error.

Symbolic subcommands insist on exact parameter values (integers, rationals,
or expressions like ``-1/2`` or ``i``); floating-point input is rejected
there so exactness is never silently lost. The numeric subcommands
(``integrate``, ``monodromy``) accept floats and complex values.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import models, reports
from .errors import ThreeWaveError
from .numerics import NumericAtlas, TrajectoryPoint, fit_pole, integrate, monodromy_check
from .parsing import load_model, parse_expr

REPORT_DIR_ENV = "THREEWAVE_REPORT_DIR"


class UsageError(Exception):
    pass


def _parse_exact_params(kind: str, text: str | None):
    """'delta=0,gamma=-1' with exact values only; floats are refused."""
    if not text:
        return None
    names = models.THREE_WAVE_PARAMS if kind == "three-wave" else models.MODIFIED_PARAMS
    values = {}
    table = models.model(kind).table
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"malformed parameter binding {item!r} (need name=value)")
        name, _, raw = item.partition("=")
        name, raw = name.strip(), raw.strip()
        if name not in names:
            raise UsageError(f"unknown parameter {name!r} for system {kind!r}")
        if any(ch in raw for ch in (".", "e", "E")) and not raw.lstrip("+-").isdigit():
            raise UsageError(
                f"parameter {name}={raw!r}: symbolic commands take exact values only"
            )
        try:
            rf = parse_expr(raw, table)
        except Exception as exc:
            raise UsageError(f"cannot parse parameter {name}={raw!r}: {exc}") from exc
        if not rf.is_constant():
            raise UsageError(f"parameter {name}={raw!r} is not a constant")
        values[name] = rf.constant_value()
    return [values.get(n) for n in names]


def _parse_numeric_params(kind: str, text: str | None) -> dict[str, complex]:
    if not text:
        return {n: 0j for n in (models.THREE_WAVE_PARAMS if kind == "three-wave" else models.MODIFIED_PARAMS)}
    out = {}
    for item in text.split(","):
        name, _, raw = item.partition("=")
        out[name.strip()] = complex(raw.strip().replace("i", "j"))
    names = models.THREE_WAVE_PARAMS if kind == "three-wave" else models.MODIFIED_PARAMS
    for n in names:
        out.setdefault(n, 0j)
    return out


def _parse_complex_list(text: str) -> list[complex]:
    return [complex(p.strip().replace("i", "j")) for p in text.split(";")]


def _emit(report: dict, args, command: str) -> None:
    if args.format == "json":
        body = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, default=str)
    elif args.format == "text":
        body = _render_text(report)
    else:
        raise UsageError("csv output is only available for 'integrate'")
    _write_out(body, args, command)


def _write_out(body: str, args, command: str) -> None:
    if not body.endswith("\n"):
        body += "\n"
    sys.stdout.write(body)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    report_dir = os.environ.get(REPORT_DIR_ENV)
    if report_dir:
        os.makedirs(report_dir, exist_ok=True)
        ext = "csv" if args.format == "csv" else ("json" if args.format == "json" else "txt")
        with open(os.path.join(report_dir, f"{command}.{ext}"), "w", encoding="utf-8") as fh:
            fh.write(body)


def _render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_render_text(val, indent + 1))
        elif isinstance(val, list):
            lines.append(f"{pad}{key}:")
            for item in val:
                if isinstance(item, dict):
                    lines.append(_render_text(item, indent + 1))
                    lines.append(f"{pad}  -")
                else:
                    lines.append(f"{pad}  - {item}")
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(l for l in lines if l)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="threewave",
        description="Exact singularity analysis, phase-space verification, and "
        "numeric continuation for the built-in quadratic systems.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, numeric=False):
        p.add_argument("--system", default="three-wave",
                       help="three-wave | modified | path to a .model file")
        p.add_argument("--params", default=None,
                       help="comma list name=value (exact values for symbolic commands)")
        p.add_argument("--format", default="json", choices=("json", "text", "csv"))
        p.add_argument("--out", default=None, help="also write the report to this path")
        if numeric:
            p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("singularities", help="accessible points on the boundary divisor")
    common(p)
    p.add_argument("--chart", default=None, help="restrict to one chart (U1, U2, U3, W)")

    p = sub.add_parser("index", help="local index (eigenvalues, ratios, integrality)")
    common(p)
    p.add_argument("--point", default="P1")

    p = sub.add_parser("alpha-test", help="scaling-limit single-valuedness classification")
    common(p)
    p.add_argument("--point", default="P4_2")

    p = sub.add_parser("painleve", help="dominant-balance search for pole orders")
    common(p)
    p.add_argument("--bound", type=int, default=2)

    p = sub.add_parser("blowup", help="blow-up pipeline at the degenerate point")
    common(p)

    p = sub.add_parser("obstructions", help="holomorphy conditions from the blow-up pipeline")
    common(p)

    p = sub.add_parser("verify-atlas", help="polynomiality + unit Jacobians on an atlas")
    common(p)
    p.add_argument("--atlas", default="resolved", choices=("resolved", "projective"))

    p = sub.add_parser("verify-symmetry", help="invariance residuals and group relations")
    common(p)
    p.add_argument("--map", default="both", choices=("pi", "s", "both"))

    p = sub.add_parser("uniqueness", help="recover the quadratic family from holomorphy")
    common(p)

    p = sub.add_parser("integrate", help="adaptive complex-path integration")
    common(p, numeric=True)
    p.add_argument("--start", required=True, help="initial state 'x;y;z' (complex)")
    p.add_argument("--path", required=True, help="waypoints 't0;t1;...' (complex)")
    p.add_argument("--t0", default="0", help="initial time (complex)")
    p.add_argument("--allow-rational", action="store_true",
                   help="skip the polynomiality precondition")

    p = sub.add_parser("monodromy", help="closed-loop deviation around a point")
    common(p, numeric=True)
    p.add_argument("--start", required=True, help="state 'x;y;z' at the loop base point")
    p.add_argument("--t0", required=True, help="loop base time (complex)")
    p.add_argument("--center", required=True, help="loop center (complex)")
    p.add_argument("--allow-rational", action="store_true")

    return ap


def _system_kind(args) -> str:
    if args.system in ("three-wave", "modified"):
        return args.system
    if os.path.exists(args.system):
        return "file"
    raise UsageError(f"unknown system {args.system!r} (not a built-in, not a file)")


def _load_file_system(args):
    """A user model file: one system plus optional maps used as the atlas.

    Parameter bindings apply to the field *and* to the chart maps, which may
    themselves depend on the parameters.
    """
    model = load_model(args.system)
    if len(model.fields) != 1:
        raise UsageError("model file must define exactly one system")
    ((base_name, field),) = model.fields.items()
    if args.params:
        bindings = {}
        for item in args.params.split(","):
            name, _, raw = item.partition("=")
            sym = model.table.get(name.strip())
            if sym is None:
                raise UsageError(f"unknown parameter {name.strip()!r} in model file")
            bindings[sym] = parse_expr(raw.strip(), model.table)
        field = models.bind_field(field, bindings)
        model.maps = [models.bind_map(m, bindings) for m in model.maps]
    return model, base_name, field


def _run_file_command(args) -> int:
    from .geometry import identity_map, jacobian_determinant, power_scaled_chart, pushforward
    from .singular import find_accessible, painleve_leading_orders, resolution_pipeline
    from .symbols import state

    model, base_name, field = _load_file_system(args)
    cmd = args.command
    if cmd == "painleve":
        balances = painleve_leading_orders(field, args.bound)
        rep = {
            "system": args.system,
            "balances": [
                {"exponents": list(b.exponents), "coefficients": [c.text() for c in b.coefficients]}
                for b in balances
            ],
        }
        _emit(rep, args, cmd)
        return 0
    if cmd == "singularities":
        per_chart = {}
        for cmap in model.maps:
            if cmap.target.boundary is None or cmap.source.name != base_name:
                continue
            w = pushforward(field, cmap)
            scan = find_accessible(w)
            per_chart[cmap.target.name] = {
                "points": [
                    {"coords": [c.text() for c in p.coords], "multiplicity": p.multiplicity}
                    for p in scan.points
                ],
                "residual_branches": list(scan.residuals),
            }
        _emit({"system": args.system, "charts": per_chart}, args, cmd)
        return 0
    if cmd == "verify-atlas":
        atlas = [identity_map(model.chart(base_name), model.table)] + [
            m for m in model.maps if m.source.name == base_name
        ]
        verdicts = models.verify_atlas_holomorphy(field, atlas)
        jac = [
            {"chart": m.target.name, "jacobian_determinant": jacobian_determinant(m).text()}
            for m in atlas
        ]
        rep = {
            "system": args.system,
            "charts": verdicts,
            "jacobians": jac,
            "all_polynomial": all(d["polynomial"] for d in verdicts),
        }
        _emit(rep, args, cmd)
        return 0 if rep["all_polynomial"] else 1
    if cmd in ("obstructions", "blowup"):
        table = field.table
        missing = [state(n) for n in ("XW", "YW", "ZW") if table.get(n) is None]
        if missing:
            table = table.extend(missing)
            field = field.retable(table)
        wvars = tuple(table.get(n) for n in ("XW", "YW", "ZW"))

        def factory(exps):
            return power_scaled_chart(field.chart, table, "W", wvars, exps)

        rep_obj = resolution_pipeline(field, factory)
        rep = {
            "system": args.system,
            "obstructions": rep_obj.obstruction.texts(),
            "solution_branches": [b.text() for b in rep_obj.branches],
            "resolvable_without_conditions": rep_obj.obstruction.is_empty(),
        }
        _emit(rep, args, cmd)
        return 0
    raise UsageError(f"command {cmd!r} does not support model files")


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ThreeWaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    kind = _system_kind(args)
    if cmd in ("integrate", "monodromy"):
        if kind == "file":
            raise UsageError("numeric commands work with the built-in systems")
        return _run_numeric(args)
    if kind == "file":
        return _run_file_command(args)
    params = _parse_exact_params(kind, args.params)

    if cmd == "singularities":
        charts = (args.chart,) if args.chart else None
        rep = reports.singularities_report(kind, params, charts)
        _emit(rep, args, cmd)
        return 0
    if cmd == "index":
        rep = reports.index_report(kind, params, args.point)
        _emit(rep, args, cmd)
        return 0
    if cmd == "alpha-test":
        rep = reports.alpha_report(kind, params, args.point)
        _emit(rep, args, cmd)
        return 0
    if cmd == "painleve":
        rep = reports.painleve_report(kind, params, args.bound)
        _emit(rep, args, cmd)
        return 0 if all(b["verified"] for b in rep["balances"]) else 1
    if cmd in ("blowup", "obstructions"):
        rep = reports.pipeline_report(kind, params)
        if cmd == "obstructions":
            rep = {
                "system": rep["system"],
                "obstructions": rep["obstructions"],
                "solution_branches": rep["solution_branches"],
                "resolvable_without_conditions": rep["resolvable_without_conditions"],
            }
        _emit(rep, args, cmd)
        return 0
    if cmd == "verify-atlas":
        rep = reports.atlas_report(kind, params, args.atlas)
        _emit(rep, args, cmd)
        if args.atlas != "resolved":
            return 0  # informational: the reciprocal charts make no holomorphy claim
        return 0 if rep["all_polynomial"] and rep["all_unit_jacobian"] else 1
    if cmd == "verify-symmetry":
        rep = reports.symmetry_report(args.map)
        _emit(rep, args, cmd)
        return 0 if rep["all_invariant"] and rep["relations"]["all_hold"] else 1
    if cmd == "uniqueness":
        rep = reports.uniqueness_report()
        _emit(rep, args, cmd)
        ok = rep["matches_reference"] and rep["normalized_nullity"] == 0
        return 0 if ok else 1
    raise UsageError(f"unhandled command {cmd!r}")


def _run_numeric(args) -> int:
    kind = _system_kind(args)
    params = _parse_numeric_params(kind, args.params)
    # numeric parameters enter at compile time; the symbolic field stays generic
    v = models.model(kind).fields["U0"]
    maps = models.resolved_atlas(kind, None)
    atlas = NumericAtlas(v, maps, params, require_polynomial=not args.allow_rational)
    start_state = tuple(_parse_complex_list(args.start))
    if len(start_state) != 3:
        raise UsageError("--start needs three components 'x;y;z'")
    t0 = complex(args.t0.replace("i", "j"))
    start = TrajectoryPoint(t0, start_state, "U0")
    if args.command == "integrate":
        path = [t0] + _parse_complex_list(args.path)
        traj = integrate(v, maps, start, path, tol=args.tol, atlas=atlas)
        if args.format == "csv":
            _write_out(traj.to_csv(), args, "integrate")
            return 0
        end_base = atlas.transition(traj.end.state, traj.end.chart, atlas.base)
        rep = {
            "steps_accepted": traj.steps_accepted,
            "steps_rejected": traj.steps_rejected,
            "switch_events": [
                {"t": str(e.t), "from": e.from_chart, "to": e.to_chart} for e in traj.events
            ],
            "end_time": str(traj.end.t),
            "end_chart": traj.end.chart,
            "end_state_base_chart": [str(c) for c in end_base],
            "error_estimate": traj.error_estimate,
        }
        try:
            fit = fit_pole(traj.points, atlas)
            rep["pole_fit"] = {
                "location": str(fit.location),
                "exponents": list(fit.exponents),
                "residual": fit.residual,
            }
        except ThreeWaveError:
            rep["pole_fit"] = None
        _emit(rep, args, "integrate")
        return 0
    center = complex(args.center.replace("i", "j"))
    rep = monodromy_check(v, maps, start, center, tol=args.tol, atlas=atlas)
    out = {
        "deviation": rep["deviation"],
        "radius": rep["radius"],
        "center": str(rep["center"]),
        "switch_events": rep["switch_events"],
    }
    _emit(out, args, "monodromy")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
