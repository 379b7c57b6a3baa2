"""Adaptive integration over complex time with chart switching.

The integrator follows a piecewise-linear path in the complex time plane
with an embedded Cash-Karp 5(4) pair and PI step-size control. Whenever the
state grows beyond a switch threshold it is mapped through the atlas and
continued in the chart where its norm is smallest -- that is what carries a
trajectory straight through a movable pole. Chart transitions go through
the base chart, which is harmless because switches happen while every
representation is still O(10).

Pole diagnostics: :func:`fit_pole` regresses log|component| against
log|t - t1| to recover integer pole orders, and :func:`monodromy_check`
integrates a closed loop and reports the relative deviation between start
and end states (small deviation evidences single-valuedness).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import FitAmbiguous, StepUnderflow
from .geometry import ChartMap, VectorField, pushforward
from .models import verify_atlas_holomorphy
from .ratfunc import RationalFn

SWITCH_THRESHOLD = 10.0
SWITCH_GAIN = 4.0

# Cash-Karp embedded pair: 6 stages, propagating order 5, embedded order 4
_CK_C = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_B4 = (2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4)


@dataclass(frozen=True)
class TrajectoryPoint:
    t: complex
    state: tuple[complex, complex, complex]
    chart: str
    err: float = 0.0  # local error estimate of the step that produced this point

    def max_norm(self) -> float:
        return max(abs(c) for c in self.state)


@dataclass(frozen=True)
class SwitchEvent:
    t: complex
    from_chart: str
    to_chart: str
    norm_before: float
    norm_after: float


@dataclass
class Trajectory:
    points: list[TrajectoryPoint] = field(default_factory=list)
    events: list[SwitchEvent] = field(default_factory=list)
    error_estimate: float = 0.0
    steps_accepted: int = 0
    steps_rejected: int = 0
    underflow: str | None = None  # diagnostic when integration stopped early

    @property
    def start(self) -> TrajectoryPoint:
        return self.points[0]

    @property
    def end(self) -> TrajectoryPoint:
        return self.points[-1]

    def records(self) -> list[str]:
        out = []
        for p in self.points:
            vals = [p.t.real, p.t.imag]
            for c in p.state:
                vals.extend((c.real, c.imag))
            vals.append(p.err)
            out.append(",".join(f"{v:.17g}" for v in vals[:2]) + f",{p.chart}," +
                       ",".join(f"{v:.17g}" for v in vals[2:]))
        return out

    def to_csv(self) -> str:
        header = "t_re,t_im,chart,x_re,x_im,y_re,y_im,z_re,z_im,err_est"
        return "\n".join([header] + self.records()) + "\n"


# -- compilation --------------------------------------------------------------------


def _fold_terms(poly, var_names: Sequence[str], params: Mapping[str, complex]):
    syms = poly.table.symbols
    var_slots = {name: k for k, name in enumerate(var_names)}
    folded: dict[tuple[int, int, int], complex] = {}
    for e, c in poly.terms.items():
        coeff = complex(c)
        exps = [0, 0, 0]
        for k, d in enumerate(e):
            if not d:
                continue
            name = syms[k].name
            if name in var_slots:
                exps[var_slots[name]] = d
            elif name in params:
                coeff *= params[name] ** d
            else:
                raise KeyError(f"symbol {name!r} has no numeric value")
        key = tuple(exps)
        folded[key] = folded.get(key, 0j) + coeff
    return [(c, e) for e, c in folded.items() if c != 0]


def compile_scalar(
    rf: RationalFn, var_names: Sequence[str], params: Mapping[str, complex]
) -> Callable[[complex, complex, complex], complex]:
    num = _fold_terms(rf.num, var_names, params)
    den = _fold_terms(rf.den, var_names, params)

    def ev(a: complex, b: complex, c: complex) -> complex:
        n = 0j
        for coeff, (e1, e2, e3) in num:
            t = coeff
            if e1:
                t *= a**e1
            if e2:
                t *= b**e2
            if e3:
                t *= c**e3
            n += t
        d = 0j
        for coeff, (e1, e2, e3) in den:
            t = coeff
            if e1:
                t *= a**e1
            if e2:
                t *= b**e2
            if e3:
                t *= c**e3
            d += t
        return n / d

    return ev


def compile_triple(rfs, var_names, params):
    fns = [compile_scalar(rf, var_names, params) for rf in rfs]

    def ev(a, b, c):
        return (fns[0](a, b, c), fns[1](a, b, c), fns[2](a, b, c))

    return ev


class NumericAtlas:
    """Compiled fields and transitions for one system on one atlas.

    ``maps`` are base-to-chart maps (the identity chart included); fields per
    chart are exact pushforwards specialized at the given parameter values.
    """

    def __init__(
        self,
        v: VectorField,
        maps: Sequence[ChartMap],
        params: Mapping[str, complex],
        require_polynomial: bool = True,
    ):
        if require_polynomial:
            verdicts = verify_atlas_holomorphy(v, maps)
            bad = [d["chart"] for d in verdicts if not d["polynomial"]]
            if bad:
                raise ValueError(
                    f"field is not polynomial on charts {bad}; "
                    "pass require_polynomial=False to integrate a rational field"
                )
        self.base = v.chart.name
        self.params = dict(params)
        self.chart_vars: dict[str, tuple[str, str, str]] = {}
        self.fields: dict[str, Callable] = {}
        self.to_base: dict[str, Callable] = {}
        self.from_base: dict[str, Callable] = {}
        base_vars = tuple(s.name for s in v.chart.vars)
        for cmap in maps:
            name = cmap.target.name
            tvars = tuple(s.name for s in cmap.target.vars)
            w = pushforward(v, cmap)
            self.chart_vars[name] = tvars
            self.fields[name] = compile_triple(w.components, tvars, params)
            self.to_base[name] = compile_triple(cmap.inverse, tvars, params)
            self.from_base[name] = compile_triple(cmap.forward, base_vars, params)

    def charts(self) -> list[str]:
        return list(self.fields)

    def transition(self, state, frm: str, to: str):
        if frm == to:
            return tuple(state)
        base = self.to_base[frm](*state)
        return self.from_base[to](*base)

    def best_chart(self, state, frm: str):
        """Chart minimizing the max-norm of the transported state."""
        best_name, best_state, best_norm = frm, tuple(state), max(abs(c) for c in state)
        for name in self.fields:
            if name == frm:
                continue
            try:
                cand = self.transition(state, frm, name)
            except (ZeroDivisionError, OverflowError):
                continue
            norm = max(abs(c) for c in cand)
            if math.isfinite(norm) and norm < best_norm:
                best_name, best_state, best_norm = name, cand, norm
        return best_name, best_state, best_norm


# -- the integrator -------------------------------------------------------------------


def _rk_step(f, y, h, direction):
    k = []
    for s in range(6):
        ys = list(y)
        for j, a in enumerate(_CK_A[s]):
            if a:
                for c in range(3):
                    ys[c] += h * a * k[j][c]
        deriv = f(*ys)
        k.append([direction * d for d in deriv])
    y5 = list(y)
    y4 = list(y)
    for j in range(6):
        for c in range(3):
            if _CK_B5[j]:
                y5[c] += h * _CK_B5[j] * k[j][c]
            if _CK_B4[j]:
                y4[c] += h * _CK_B4[j] * k[j][c]
    err = [y5[c] - y4[c] for c in range(3)]
    return tuple(y5), err


def integrate(
    v: VectorField,
    maps: Sequence[ChartMap],
    start: TrajectoryPoint,
    path: Sequence[complex],
    tol: float = 1e-10,
    params: Mapping[str, complex] | None = None,
    atlas: NumericAtlas | None = None,
    require_polynomial: bool = True,
    max_steps: int = 200_000,
    on_underflow: str = "raise",
) -> Trajectory:
    """Integrate along the piecewise-linear complex-time path.

    The state follows the chart whose representation stays O(1); switch
    events are recorded. When no chart keeps the state finite (an unresolved
    singularity or a genuinely bad path) a :class:`StepUnderflow` is raised,
    or with ``on_underflow="stop"`` the partial trajectory is returned with
    its ``underflow`` field set.
    """
    if atlas is None:
        atlas = NumericAtlas(v, maps, params or {}, require_polynomial=require_polynomial)
    chart = start.chart
    y = tuple(start.state)
    traj = Trajectory()
    traj.points.append(TrajectoryPoint(start.t, y, chart))
    t_here = complex(start.t)
    waypoints = [complex(p) for p in path]
    if waypoints and waypoints[0] != t_here:
        waypoints = [t_here] + waypoints

    err_prev = 1.0
    for seg_end in waypoints[1:]:
        seg_start = t_here
        delta = seg_end - seg_start
        length = abs(delta)
        if length <= 1e-14 * (1.0 + abs(seg_start)):
            continue
        direction = delta / length
        s = 0.0
        h = min(length, 0.1 * (1 + length))
        hmin = 1e-13 * max(1.0, length)
        end_slack = 1e-14 * max(1.0, length)
        while length - s > end_slack:
            h = min(h, length - s)
            if h < hmin:
                # before giving up, try continuing in a better chart
                best, bstate, bnorm = atlas.best_chart(y, chart)
                if best != chart and bnorm * SWITCH_GAIN <= max(abs(c) for c in y):
                    traj.events.append(
                        SwitchEvent(t_here, chart, best, max(abs(c) for c in y), bnorm)
                    )
                    chart, y = best, tuple(bstate)
                    h = hmin * 10
                    continue
                message = f"step size collapsed at t = {t_here}: no chart keeps the state finite"
                if on_underflow == "stop":
                    traj.underflow = message
                    return traj
                raise StepUnderflow(message)
            if traj.steps_accepted + traj.steps_rejected > max_steps:
                message = f"step budget exhausted at t = {t_here}"
                if on_underflow == "stop":
                    traj.underflow = message
                    return traj
                raise StepUnderflow(message)
            f = atlas.fields[chart]
            try:
                y_new, err_vec = _rk_step(f, y, h, direction)
            except (OverflowError, ZeroDivisionError):
                y_new, err_vec = None, None
            if y_new is None or any(
                not (math.isfinite(c.real) and math.isfinite(c.imag)) for c in y_new
            ):
                err_norm = math.inf
            else:
                err_norm = 0.0
                for c in range(3):
                    scale = tol + tol * max(abs(y[c]), abs(y_new[c]))
                    err_norm = max(err_norm, abs(err_vec[c]) / scale)
            if err_norm <= 1.0:
                s += h
                t_here = seg_start + direction * s
                y = y_new
                traj.steps_accepted += 1
                local_err = max(abs(e) for e in err_vec)
                traj.error_estimate += local_err
                norm = max(abs(c) for c in y)
                if norm > SWITCH_THRESHOLD:
                    best, bstate, bnorm = atlas.best_chart(y, chart)
                    if best != chart and bnorm * SWITCH_GAIN <= norm:
                        traj.events.append(SwitchEvent(t_here, chart, best, norm, bnorm))
                        chart, y = best, tuple(bstate)
                traj.points.append(TrajectoryPoint(t_here, y, chart, local_err))
                # PI controller (order-5 propagation)
                fac = 0.9 * err_norm ** (-0.7 / 5) * err_prev ** (0.4 / 5) if err_norm > 0 else 5.0
                h *= min(5.0, max(0.2, fac))
                err_prev = max(err_norm, 1e-4)
            else:
                traj.steps_rejected += 1
                if math.isfinite(err_norm):
                    h *= max(0.1, 0.9 * err_norm ** (-1 / 4))
                else:
                    h *= 0.1
        t_here = seg_end
    return traj


# -- pole fitting ------------------------------------------------------------------------


@dataclass(frozen=True)
class PoleFit:
    location: complex
    exponents: tuple[int, int, int]
    leading: tuple[complex, complex, complex]
    residual: float


def _linfit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx else 0.0
    intercept = my - slope * mx
    rms = math.sqrt(sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / n)
    return slope, intercept, rms


def fit_pole(
    points: Sequence[TrajectoryPoint],
    atlas: NumericAtlas,
    residual_threshold: float = 0.05,
) -> PoleFit:
    """Fit integer pole orders to a trajectory segment approaching a pole.

    Points are transported to the base chart; the pole time is located by a
    linear model of the reciprocal of the largest component and then refined
    by minimizing the joint log-log regression residual. Raises
    :class:`FitAmbiguous` when no component behaves like a pole or the final
    residual stays above the threshold.
    """
    transported = []
    for p in points:
        try:
            s = atlas.transition(p.state, p.chart, atlas.base)
        except (ZeroDivisionError, OverflowError):
            continue
        norm = max(abs(c) for c in s)
        if math.isfinite(norm):
            transported.append((p.t, s))
    if len(transported) < 8:
        raise FitAmbiguous("not enough usable points near the pole")
    # the pole sits where 1/|state| is smallest; keep only the asymptotic
    # window around that peak, on both sides
    lead_c = max(
        range(3), key=lambda c: max(abs(s[c]) for _, s in transported)
    )
    peak_idx = max(range(len(transported)), key=lambda i: abs(transported[i][1][lead_c]))
    peak = abs(transported[peak_idx][1][lead_c])
    if peak < 100.0:
        raise FitAmbiguous("no component grows like a pole on this segment")
    base_pts: list = []
    for cutoff in (max(50.0, peak * 1e-3), max(20.0, peak * 1e-4), 10.0):
        lo = peak_idx
        while lo > 0 and abs(transported[lo - 1][1][lead_c]) >= cutoff:
            lo -= 1
        hi = peak_idx
        while hi + 1 < len(transported) and abs(transported[hi + 1][1][lead_c]) >= cutoff:
            hi += 1
        base_pts = [
            (t, s) for t, s in transported[lo : hi + 1] if abs(s[lead_c]) <= 1e12
        ]
        if len(base_pts) >= 12:
            break
    if len(base_pts) < 8:
        raise FitAmbiguous("not enough usable points near the pole")
    ts = [p[0] for p in base_pts]
    t1 = transported[peak_idx][0]

    span_t = abs(ts[-1] - ts[0])
    eps = 1e-6 * max(span_t, 1e-12)

    def usable(t1_try: complex):
        return [(t, s) for t, s in base_pts if abs(t - t1_try) >= eps]

    def joint_residual(t1_try: complex) -> float:
        pts = usable(t1_try)
        if len(pts) < 8:
            return math.inf
        tot, cnt = 0.0, 0
        xs = [math.log(abs(t - t1_try)) for t, _ in pts]
        for c in range(3):
            ys = [math.log(max(1e-300, abs(s[c]))) for _, s in pts]
            slope, _, rms = _linfit(xs, ys)
            if abs(slope) > 0.25:
                tot += rms
                cnt += 1
        return tot / cnt if cnt else math.inf

    # local refinement of the pole location on a shrinking grid
    span = max(abs(ts[-1] - ts[0]), 1e-12) * 0.1
    best = t1
    for _ in range(25):
        cands = [best + dx * span + 1j * dy * span for dx in (-1, 0, 1) for dy in (-1, 0, 1)]
        best = min(cands, key=joint_residual)
        span *= 0.6
    t1 = best

    fit_pts = usable(t1)
    xs = [math.log(abs(t - t1)) for t, _ in fit_pts]
    exponents = []
    leading = []
    resid = 0.0
    for c in range(3):
        ys = [math.log(max(1e-300, abs(s[c]))) for _, s in fit_pts]
        slope, intercept, rms = _linfit(xs, ys)
        m = -round(slope)
        if abs(-slope - m) > 0.2:
            raise FitAmbiguous(f"component {c + 1} slope {-slope:.3f} is not near an integer")
        exponents.append(int(m))
        # average of x * (t - t1)^m estimates the leading constant
        acc = 0j
        for t, s in fit_pts:
            acc += s[c] * (t - t1) ** m
        leading.append(acc / len(fit_pts))
        if m != 0:
            resid = max(resid, rms)
    if max(exponents) < 1:
        raise FitAmbiguous("no positive pole order found")
    if resid > residual_threshold:
        raise FitAmbiguous(f"log-log fit residual {resid:.3g} exceeds {residual_threshold}")
    return PoleFit(t1, tuple(exponents), tuple(leading), resid)


# -- monodromy ---------------------------------------------------------------------------


def monodromy_check(
    v: VectorField,
    maps: Sequence[ChartMap],
    start: TrajectoryPoint,
    center: complex,
    tol: float = 1e-12,
    segments: int = 24,
    params: Mapping[str, complex] | None = None,
    atlas: NumericAtlas | None = None,
    require_polynomial: bool = True,
) -> dict:
    """Integrate a closed circular loop around ``center`` through ``start.t``
    and report the relative deviation between the end and start states."""
    if atlas is None:
        atlas = NumericAtlas(v, maps, params or {}, require_polynomial=require_polynomial)
    radius = abs(start.t - center)
    if radius == 0:
        raise ValueError("start time coincides with the loop center")
    phase = cmath.phase(start.t - center)
    path = [
        center + radius * cmath.exp(1j * (phase + 2 * math.pi * k / segments))
        for k in range(segments + 1)
    ]
    path[0] = start.t
    path[-1] = start.t  # close the loop exactly
    traj = integrate(v, maps, start, path, tol=tol, atlas=atlas)
    end = traj.end
    end_state = atlas.transition(end.state, end.chart, start.chart)
    scale = max(1.0, max(abs(c) for c in start.state))
    deviation = max(abs(a - b) for a, b in zip(end_state, start.state)) / scale
    return {
        "deviation": deviation,
        "radius": radius,
        "center": center,
        "switch_events": len(traj.events),
        "trajectory": traj,
    }
