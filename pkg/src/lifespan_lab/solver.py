"""Time integration of u_t = Δu + |x|^l |u|^α u up to blow-up."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .bounds import ProblemSpec, contraction_constant, upper_bound_necessary
from .errors import (
    BoundaryDominance,
    InsufficientHistory,
    NegativeData,
    NotContracting,
)
from .field_core import (
    Field,
    Grid,
    NormSpec,
    corner_cell_integral,
    make_grid,
    norm,
    norm_weights,
    sample_profile,
)
from .profiles import (
    BoundedBump,
    DiracApprox,
    MeasureDatum,
    TailPower,
    dilate,
    radial_pieces,
)
from .semigroup import heat_step, heat_sup, radial_heat_values, sector_heat_step


@dataclass(frozen=True)
class EvolveConfig:
    dt_initial: float = 1e-2
    dt_min: float = 1e-12
    blowup_threshold: float = 1e6
    horizon: float = 10.0
    splitting: str = "strang"
    norm_record_stride: int = 1
    safety: float = 0.05
    q: float = 2.0
    weight_gamma: float = 0.0
    boundary_tol: float = 1e-3
    max_steps: int = 200000

    def __post_init__(self):
        if not 0 < self.dt_min <= self.dt_initial:
            raise ValueError("need 0 < dt_min <= dt_initial")
        if not self.blowup_threshold > 1:
            raise ValueError("blowup_threshold must exceed 1")
        if self.splitting != "strang":
            raise ValueError("only strang splitting is implemented")


@dataclass(frozen=True)
class HistoryPoint:
    t: float
    sup_norm: float
    l1_norm: float
    lq_norm: float
    weighted_norm: float
    dt: float
    rate_norm: float


@dataclass
class BlowupEstimate:
    status: str  # blowup | no_blowup_within_horizon | dt_underflow
    T_est: float
    bracket: tuple[float, float]
    history: list = field(default_factory=list)
    final: Field | None = None

    HEADER = ("t", "sup_norm", "l1_norm", "lq_norm", "weighted_norm", "dt")

    def history_rows(self):
        for p in self.history:
            yield (p.t, p.sup_norm, p.l1_norm, p.lq_norm, p.weighted_norm, p.dt)


@dataclass(frozen=True)
class BlowupInStep:
    """Returned by the nonlinear substep when some cell blows up inside it."""

    time: float


@lru_cache(maxsize=32)
def potential_weights(grid: Grid, l: float) -> np.ndarray:
    """|x|^l per cell; cells near the origin carry cell averages."""
    if l == 0:
        return np.ones(grid.shape)
    if l > 0:
        return norm_weights(grid, float(l))
    w = np.array(grid.radius() ** l)
    h, n = grid.spacing, grid.dimension
    mid = grid.points_per_axis // 2
    near = grid.radius() <= 2 * h
    sub_k = {1: 64, 2: 24, 3: 10}[n]
    x = (np.arange(sub_k) + 0.5) / sub_k - 0.5
    sub = np.stack([m.ravel() for m in np.meshgrid(*([x] * n), indexing="ij")], axis=-1) * h
    pts = grid.points()
    for i in np.argwhere(near):
        sp = pts[tuple(i)] + sub
        w[tuple(i)] = np.mean(np.sqrt(np.sum(sp * sp, axis=-1)) ** l)
    for corner in np.ndindex(*([2] * n)):
        idx = tuple(mid - 1 + c for c in corner)
        signs = np.array([1.0 if c else -1.0 for c in corner])
        w[idx] = corner_cell_integral(lambda p: np.sqrt(np.sum(p * p, axis=-1)) ** l, h, signs, -l) / h**n
    w.flags.writeable = False
    return w


def nonlinear_substep(fld: Field, dt: float, alpha: float, l: float = 0.0,
                      weights: np.ndarray | None = None):
    """Exact flow of v' = |x|^l |v|^α v over dt in every cell."""
    w = potential_weights(fld.grid, float(l)) if weights is None else weights
    v = fld.values
    growth = alpha * w * np.abs(v) ** alpha
    denom = 1.0 - growth * dt
    if np.any(denom <= 0):
        return BlowupInStep(float(1.0 / np.max(growth)))
    return fld.with_values(v * denom ** (-1.0 / alpha))


def _rate_norm(v: np.ndarray, w: np.ndarray, alpha: float) -> float:
    # (max |x|^l |u|^α)^(1/α): the sup norm when l = 0
    return float(np.max(w * np.abs(v) ** alpha)) ** (1 / alpha)


def estimate_blowup_time(history, alpha: float, dt: float = 0.0) -> tuple[float, tuple[float, float]]:
    """Type-I extrapolation of the blow-up time from the last three records.

    Each record gives T_k = t_k + 1/(α n_k^α); a linear fit of T_k against
    t_k is solved for its fixed point.  Noisy or curved data fall back to
    the last per-point estimate.
    """
    pts = []
    for p in history:
        if isinstance(p, HistoryPoint):
            pts.append((p.t, p.rate_norm))
        else:
            pts.append((float(p[0]), float(p[1])))
    if len(pts) < 3:
        raise InsufficientHistory("need at least three history points")
    ts = np.array([t for t, _ in pts])
    if np.any(np.diff(ts) <= 0):
        raise InsufficientHistory("history times must increase")
    ns = np.array([n for _, n in pts])
    Tk = ts + 1.0 / (alpha * ns**alpha)
    t3, T3 = ts[-3:], Tk[-3:]
    est = float(T3[-1])
    if np.ptp(T3) > 0:
        slope, icpt = np.polyfit(t3 - t3[-1], T3, 1)
        resid = T3 - (icpt + slope * (t3 - t3[-1]))
        noisy = np.max(np.abs(resid)) > 0.25 * np.ptp(T3)
        if abs(slope) <= 0.5 and not noisy:
            # fixed point of T = icpt + slope (T - t_last)
            est = float((icpt - slope * t3[-1]) / (1 - slope))
        elif noisy:
            est = float(np.mean(T3))
    lo = float(ts[-1])
    hi = float(np.max(Tk)) + dt
    est = min(max(est, lo), hi)
    return est, (lo, hi)


def _record(u: Field, t: float, dt: float, w: np.ndarray, alpha: float, cfg: EvolveConfig) -> HistoryPoint:
    return HistoryPoint(
        t=t,
        sup_norm=norm(u, NormSpec(math.inf, 0.0)),
        l1_norm=norm(u, NormSpec(1.0, 0.0)),
        lq_norm=norm(u, NormSpec(cfg.q, 0.0)),
        weighted_norm=norm(u, NormSpec(cfg.q, cfg.weight_gamma)),
        dt=dt,
        rate_norm=_rate_norm(u.values, w, alpha),
    )


def _boundary_values(v: np.ndarray) -> np.ndarray:
    parts = []
    for axis in range(v.ndim):
        parts.append(np.take(v, [0, -1], axis=axis).ravel())
    return np.concatenate(parts)


def check_boundary_dominance(u: Field, w: np.ndarray, alpha: float, horizon: float, tol: float) -> float:
    """Nonlinear growth rate on the outer cells times the horizon."""
    grow = alpha * _boundary_values(w) * np.abs(_boundary_values(u.values)) ** alpha
    score = float(np.max(grow)) * horizon
    if score >= tol:
        raise BoundaryDominance(
            f"growth on the box boundary times horizon is {score:.3g} (limit {tol:g}); enlarge the box"
        )
    return score


def strang_step(u: Field, dt: float, alpha: float, l: float, w: np.ndarray, m: int):
    """Half nonlinear flow, full heat step, half nonlinear flow."""
    a = nonlinear_substep(u, dt / 2, alpha, l, w)
    if isinstance(a, BlowupInStep):
        return a
    b = sector_heat_step(a, dt, m) if m else heat_step(a, dt)
    c = nonlinear_substep(b, dt / 2, alpha, l, w)
    if isinstance(c, BlowupInStep):
        return BlowupInStep(dt / 2 + c.time)
    return c


def evolve(profile, lam: float, spec: ProblemSpec, grid: Grid, config: EvolveConfig = EvolveConfig()) -> BlowupEstimate:
    """Integrate from lam * profile until blow-up or the horizon."""
    alpha, l = spec.alpha, float(spec.l)
    if isinstance(profile, MeasureDatum):
        profile = profile.as_profile(width=grid.spacing**2)
    u = sample_profile(profile.scaled(lam), grid)
    m = u.antisymmetry_axes
    w = potential_weights(grid, l)
    floor = max(config.dt_min, grid.spacing**2 / 4)
    horizon = config.horizon
    t, dt_cur = 0.0, max(config.dt_initial, floor)
    hist = [_record(u, 0.0, 0.0, w, alpha, config)]
    recent = deque([(0.0, hist[0].rate_norm)], maxlen=3)
    rate0 = max(hist[0].rate_norm, 1e-300)
    step, floor_steps = 0, 0
    status, T_cross = "no_blowup_within_horizon", None
    while t < horizon:
        if l > 0:
            check_boundary_dominance(u, w, alpha, horizon, config.boundary_tol)
        rate = alpha * float(np.max(w * np.abs(u.values) ** alpha))
        dt = min(dt_cur, config.safety / rate if rate > 0 else math.inf, horizon - t)
        at_floor = dt <= floor
        if at_floor:
            dt = floor
        res = strang_step(u, dt, alpha, l, w, m)
        if isinstance(res, BlowupInStep):
            if not at_floor:
                dt_cur = max(dt / 2, floor)
                continue
            T_cross = t + res.time
            status = "blowup"
            break
        if not at_floor and norm(res) > 1.1 * norm(u):
            dt_cur = max(dt / 2, floor)
            continue
        u = res
        t += dt
        step += 1
        floor_steps = floor_steps + 1 if at_floor else 0
        dt_cur = min(2 * dt, config.dt_initial) if not at_floor else dt_cur
        rn = _rate_norm(u.values, w, alpha)
        recent.append((t, rn))
        if step % config.norm_record_stride == 0:
            hist.append(_record(u, t, dt, w, alpha, config))
        if rn >= config.blowup_threshold * rate0:
            status = "blowup"
            break
        if step >= config.max_steps or floor_steps > 10 * config.max_steps // 100:
            status = "dt_underflow"
            break
    if hist[-1].t != t:
        hist.append(_record(u, t, dt, w, alpha, config))
    if status == "no_blowup_within_horizon":
        return BlowupEstimate(status, math.inf, (t, math.inf), hist, u)
    if status == "dt_underflow":
        return BlowupEstimate(status, math.nan, (t, math.inf), hist, u)
    if T_cross is not None:
        hi = T_cross + floor
        if len(recent) == 3:
            _, (lo, hi2) = estimate_blowup_time(list(recent), alpha, floor)
            hi = max(hi, hi2)
        return BlowupEstimate(status, T_cross, (t, hi), hist, u)
    est, bracket = estimate_blowup_time(list(recent), alpha, dt)
    return BlowupEstimate(status, est, bracket, hist, u)


def check_necessary_condition(profile, lam: float, times, spec: ProblemSpec, grid: Grid | None = None,
                              eps: float = 1e-3) -> tuple[bool, float]:
    """max over times of α lam^α t ||e^{tΔ}phi||^α; must stay below 1 before blow-up."""
    if getattr(profile, "lam", 1.0) < 0:
        raise NegativeData("negative multiplier")
    ratios = [
        spec.alpha * lam**spec.alpha * t * heat_sup(profile, t, spec.N, grid) ** spec.alpha
        for t in times if t > 0
    ]
    worst = max(ratios, default=0.0)
    return worst <= 1 + eps, worst


# Picard iteration

@dataclass(frozen=True)
class PicardConfig:
    T: float
    M: float
    K: float
    q: float = math.inf
    r: float = math.inf
    max_iterations: int = 50
    tolerance: float = 1e-10
    steps: int = 100


@dataclass
class PicardResult:
    converged: bool
    iterations: int
    distances: list
    contraction_factor: float
    condition_satisfied: bool
    times: np.ndarray
    fields: list


def picard_solve(profile, lam: float, spec: ProblemSpec, grid: Grid, cfg: PicardConfig) -> PicardResult:
    """Fixed-point iteration of the Duhamel map on a uniform time grid.

    The time integral uses the trapezoid rule, folded into a recursion so
    each sweep costs one heat step per time level.
    """
    alpha, N = spec.alpha, spec.N
    w = potential_weights(grid, float(spec.l))
    # keep every step resolvable by the heat kernel
    n = max(1, min(cfg.steps, int(cfg.T / (grid.spacing**2 / 4))))
    dt = cfg.T / n
    times = np.linspace(0.0, cfg.T, n + 1)
    u0 = sample_profile(profile.scaled(lam), grid)
    m = u0.antisymmetry_axes

    def heat(f, s):
        return sector_heat_step(f, s, m) if m else heat_step(f, s)

    free = [u0]
    for _ in range(n):
        free.append(heat(free[-1], dt))
    iq = 0.0 if cfg.q == math.inf else 1 / cfg.q
    ir = 0.0 if cfg.r == math.inf else 1 / cfg.r
    beta = (N / 2) * (iq - ir)
    try:
        C = contraction_constant(alpha, cfg.q, cfg.r, N)
        cond = cfg.K + C * cfg.T ** (1 - N * alpha * iq / 2) * cfg.M ** (alpha + 1) <= cfg.M
    except Exception:
        cond = False

    def source(f):
        return w * np.abs(f.values) ** alpha * f.values

    def sweep(traj):
        out = [free[0]]
        acc = np.zeros(grid.shape)  # Duhamel integral at the current level
        prev_src = source(traj[0])
        for j in range(1, n + 1):
            src = source(traj[j])
            moved = heat(u0.with_values(acc + 0.5 * dt * prev_src), dt).values
            acc = moved + 0.5 * dt * src
            out.append(free[j].with_values(free[j].values + acc))
            prev_src = src
        return out

    spec_r = NormSpec(cfg.r, 0.0)

    def dist(a, b):
        best = 0.0
        for j, (x, y) in enumerate(zip(a, b)):
            if times[j] == 0 and beta > 0:
                continue
            d = norm(x.with_values(x.values - y.values), spec_r)
            best = max(best, times[j] ** beta * d if beta else d)
        return best

    traj = list(free)
    dists, grows = [], 0
    for it in range(1, cfg.max_iterations + 1):
        nxt = sweep(traj)
        d = dist(nxt, traj)
        dists.append(d)
        traj = nxt
        if d <= cfg.tolerance:
            return PicardResult(True, it, dists, _factor(dists), cond, times, traj)
        if len(dists) > 1 and d > dists[-2]:
            grows += 1
            if grows >= 3:
                raise NotContracting(f"distances grew for 3 iterations (last {d:.3g})")
        else:
            grows = 0
    return PicardResult(False, cfg.max_iterations, dists, _factor(dists), cond, times, traj)


def _factor(d: list) -> float:
    if len(d) < 2 or d[-2] == 0:
        return 0.0
    return d[-1] / d[-2]


# rescaled driver

def _support_radius(profile) -> float:
    if isinstance(profile, BoundedBump):
        return 6 * profile.width
    if isinstance(profile, DiracApprox):
        return 12 * math.sqrt(profile.width)
    r = profile.support_radius()
    return 0.0 if math.isinf(r) else r


def _peak_radius(profile) -> float:
    # data whose maximum sits away from the origin need the box to cover it
    if isinstance(profile, TailPower):
        return profile.radius
    return 0.0


def characteristic_time(profile, lam: float, spec: ProblemSpec, t_max: float = 1e12) -> float | None:
    """Smallest t with α t lam^α max |x|^l (e^{tΔ}phi)^α >= 1, for sizing runs.

    Exact necessary-condition time when l = 0; a radial 1D quadrature
    heuristic otherwise.
    """
    if spec.l == 0:
        up = upper_bound_necessary(profile, lam, spec, t_max)
        return up.T
    a, l, N = spec.alpha, spec.l, spec.N
    try:
        pieces = radial_pieces(profile)
    except NotImplementedError:
        pieces = None
    for t in np.geomspace(1e-12, t_max, 145):
        if pieces is not None:
            sd = math.sqrt(t)
            rhos = np.concatenate([[1e-9 * sd], np.geomspace(1e-3 * sd, 30 * sd + 10, 60)])
            vals = radial_heat_values(pieces, N, t, rhos) * abs(profile.lam)
        elif isinstance(profile, BoundedBump):
            w2 = profile.width**2
            rhos = np.geomspace(1e-6, 30 * math.sqrt(t) + 6 * profile.width, 80)
            vals = abs(profile.lam * profile.amplitude) * (w2 / (w2 + 4 * t)) ** (N / 2) * np.exp(-rhos**2 / (w2 + 4 * t))
        else:
            return None
        score = a * t * lam**a * float(np.max(rhos**l * np.abs(vals) ** a))
        if score >= 1:
            return float(t)
    return None


_AXIS_CAP = {2: 512, 3: 96}


def solve_lifespan(profile, lam: float, spec: ProblemSpec, *, spacing: float = 0.02,
                   horizon: float | None = None, config: EvolveConfig | None = None,
                   t_scale: float | None = None) -> BlowupEstimate:
    """Blow-up time of lam * profile, computed on a rescaled problem.

    The datum is dilated so that its characteristic time becomes one; the
    run uses a grid of the given spacing in rescaled units and the result
    is mapped back.
    """
    alpha, l, N = spec.alpha, spec.l, spec.N
    sigma = (2 + l) / alpha
    base = profile.as_profile(width=1e-4) if isinstance(profile, MeasureDatum) else profile
    T_ref = t_scale or characteristic_time(base, lam, spec)
    if T_ref is None or not math.isfinite(T_ref):
        T_ref = horizon if horizon else 1.0
    s = math.sqrt(T_ref)
    scaled = dilate(base.scaled(lam), s, sigma, dimension=N)
    rel_horizon = (horizon / T_ref) if horizon else (1.5 if l == 0 else 20.0)
    reach = 10 * math.sqrt(rel_horizon) + (_support_radius(scaled) if l > 0 else _peak_radius(scaled))
    h = spacing
    n = max(2 * int(math.ceil(reach / h)), 16)
    cap = _AXIS_CAP.get(N)
    if cap and n > cap:
        n, h = cap, 2 * reach / cap
    grid = make_grid(N, n * h / 2, n)
    cfg = replace(config or EvolveConfig(), horizon=rel_horizon)
    est = evolve(scaled, 1.0, spec, grid, cfg)
    sig_q = N / cfg.q if cfg.q != math.inf else 0.0
    hist = [
        HistoryPoint(
            t=p.t * T_ref,
            sup_norm=p.sup_norm * s**-sigma,
            l1_norm=p.l1_norm * s ** (N - sigma),
            lq_norm=p.lq_norm * s ** (sig_q - sigma),
            weighted_norm=p.weighted_norm * s ** (cfg.weight_gamma + sig_q - sigma),
            dt=p.dt * T_ref,
            rate_norm=p.rate_norm * s ** (-sigma + l / alpha),
        )
        for p in est.history
    ]
    lo, hi = est.bracket
    return BlowupEstimate(est.status, est.T_est * T_ref, (lo * T_ref, hi * T_ref), hist, est.final)
