"""Scaling identities for life-spans, pointwise monotonicity of dilated data, log-log fits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .bounds import ProblemSpec, report_bounds
from .errors import DegenerateScaling, InsufficientData
from .profiles import Profile, SingularPower, TailPower, TruncatedSingular, TwoPower, dilate

# A solver handle maps (profile, lam, spec) to a life-span estimate.
SolverHandle = Callable[[Profile, float, ProblemSpec], float]


@dataclass(frozen=True)
class ScalingRelation:
    sigma: float
    gamma: float
    exponent: float

    def mu(self, lam: float) -> float:
        """Dilation factor paired with the amplitude lam."""
        return lam ** (1 / (self.gamma - self.sigma))

    def lam(self, mu: float) -> float:
        return mu ** (self.gamma - self.sigma)


def _rational(*xs) -> bool:
    return all(isinstance(x, Rational) for x in xs)


def scaling_relation(alpha, gamma, l=0) -> ScalingRelation:
    """Equation degree (2+l)/alpha, datum degree gamma and the life-span exponent.

    Integer or Fraction inputs are kept exact.
    """
    if _rational(alpha, gamma, l):
        sigma = Fraction(2 + l) / Fraction(alpha)
        gamma = Fraction(gamma)
    else:
        sigma = (2 + l) / alpha
    if gamma == sigma:
        raise DegenerateScaling(f"datum degree {gamma} equals the equation degree")
    return ScalingRelation(sigma, gamma, 2 / (sigma - gamma))


def bound_handle(profile: Profile, lam: float, spec: ProblemSpec) -> float:
    """Best contraction lower bound, usable wherever a solver handle is."""
    best = report_bounds(profile, lam, spec).best_lower()
    if best is None:
        raise ValueError("no lower bound applies to this datum")
    return best.T


def solver_handle(**kw) -> SolverHandle:
    """Handle around the rescaled numerical solver."""
    from .solver import solve_lifespan

    def run(profile, lam, spec):
        return solve_lifespan(profile, lam, spec, **kw).T_est

    return run


def homogeneous_identity_check(psi: Profile, lams: Sequence[float], spec: ProblemSpec,
                               solver: SolverHandle | None = None) -> float:
    """Largest relative deviation of lam^e T(lam psi) from its value at lams[0]."""
    solver = solver or solver_handle()
    gamma = psi.singular_order
    rel = scaling_relation(spec.alpha, gamma, spec.l)
    e = float(rel.exponent)
    vals = [lam**e * solver(psi, lam, spec) for lam in lams]
    ref = vals[0]
    return max(abs(v / ref - 1) for v in vals)


@dataclass
class MonotonicityResult:
    passed: bool
    direction: str
    worst_pair: tuple[float, float] | None
    worst_violation: float


def expected_direction(profile: Profile, weight_power: float) -> str:
    """Direction in mu of mu^w phi(mu x) for the shipped families."""
    if isinstance(profile, TruncatedSingular):
        return "nonincreasing" if weight_power <= profile.gamma else "unknown"
    if isinstance(profile, TailPower):
        return "nondecreasing" if weight_power >= profile.gamma else "unknown"
    if isinstance(profile, TwoPower):
        lo, hi = sorted((profile.gamma1, profile.gamma2))
        if weight_power <= lo:
            return "nonincreasing"
        if weight_power >= hi:
            return "nondecreasing"
    return "unknown"


def monotonicity_check(profile: Profile, weight_power: float, mus: Sequence[float], points,
                       direction: str | None = None) -> MonotonicityResult:
    """Pointwise ordering of mu^w D_mu phi across consecutive mu at the sample points."""
    direction = direction or expected_direction(profile, weight_power)
    if direction not in ("nonincreasing", "nondecreasing"):
        raise ValueError(f"no monotone direction known for this family and weight {weight_power}")
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    mus = sorted(mus)
    rows = [dilate(profile, mu, weight_power, dimension=pts.shape[-1]).values(pts) for mu in mus]
    sign = -1.0 if direction == "nonincreasing" else 1.0
    worst, pair = 0.0, None
    for a, b, va, vb in zip(mus, mus[1:], rows, rows[1:]):
        # a positive step against the expected direction is a violation
        ok = np.isfinite(va) & np.isfinite(vb)  # the origin of singular data is skipped
        va, vb = va[ok], vb[ok]
        step = sign * (va - vb)
        scale = np.maximum(np.abs(va), np.abs(vb))
        bad = np.where(scale > 0, step / np.where(scale > 0, scale, 1), 0.0)
        if bad.size == 0:
            continue
        top = float(np.max(bad))
        if top > worst:
            worst, pair = top, (a, b)
    return MonotonicityResult(worst <= 1e-12, direction, pair, worst)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    half_width: float
    intercept: float
    n: int

    def within(self, target: float, rel: float) -> bool:
        return abs(self.slope - target) <= rel * abs(target)


def exponent_fit(pairs, confidence: float = 0.95) -> ExponentFit:
    """Least-squares slope of log T against log lam.

    Two points give the exact line and an infinite half-width.
    """
    data = [(float(a), float(b)) for a, b in pairs]
    if len(data) < 2:
        raise InsufficientData("need at least two (lambda, T) pairs")
    if any(a <= 0 or b <= 0 or not math.isfinite(b) for a, b in data):
        raise InsufficientData("values must be positive and finite")
    x = np.log([a for a, _ in data])
    y = np.log([b for _, b in data])
    if np.ptp(x) == 0:
        raise InsufficientData("all lambda values coincide")
    fit = stats.linregress(x, y)
    n = len(data)
    if n == 2:
        return ExponentFit(float(fit.slope), math.inf, float(fit.intercept), n)
    q = stats.t.ppf(0.5 + confidence / 2, n - 2)
    return ExponentFit(float(fit.slope), float(q * fit.stderr), float(fit.intercept), n)


@dataclass
class LimitReport:
    direction: str
    exponent: float
    lams: list
    values: list
    trend: str
    divergent_branch: bool
    passed: bool
    bracket: tuple[float, float] | None = None
    messages: list = field(default_factory=list)


def _family_gamma(profile: Profile, direction: str) -> float:
    if isinstance(profile, TwoPower):
        # the convergent pairing: singularity for large lam, decay for small lam
        return profile.gamma1 if direction == "to_infinity" else profile.gamma2
    return profile.gamma


def limit_structure_check(profile: Profile, direction: str, spec: ProblemSpec,
                          solver: SolverHandle | None = None, *, gamma: float | None = None,
                          lams: Sequence[float] | None = None, factor: float = 10.0,
                          rtol: float = 1e-2) -> LimitReport:
    """Trend of lam^e T(lam phi) along a directed lam grid.

    Where the dilated family is monotone in the direction that makes the
    rescaled life-span converge, the values must be monotone and lie
    between the homogeneous and the family life-spans.  On the other
    branch they must grow past ``factor`` times the lam = 1 value.
    """
    if direction not in ("to_zero", "to_infinity"):
        raise ValueError("direction must be to_zero or to_infinity")
    solver = solver or solver_handle()
    g = _family_gamma(profile, direction) if gamma is None else gamma
    e = float(scaling_relation(spec.alpha, g, spec.l).exponent)
    if lams is None:
        lams = [2.0**k for k in range(7)] if direction == "to_infinity" else [2.0**-k for k in range(7)]
    lams = list(lams)
    vals = [lam**e * solver(profile, lam, spec) for lam in lams]

    mono = expected_direction(profile, g)
    rel = scaling_relation(spec.alpha, g, spec.l)
    # lam = mu^(g - sigma): when g < sigma, larger lam means smaller mu,
    # larger rescaled data and a shorter rescaled life-span
    flip = {"nonincreasing": "nondecreasing", "nondecreasing": "nonincreasing"}
    trend = mono if rel.gamma < rel.sigma else flip.get(mono, mono)
    divergent = (trend == "nonincreasing" and direction == "to_zero") or (
        trend == "nondecreasing" and direction == "to_infinity")
    rep = LimitReport(direction, e, lams, vals, trend, divergent, True)
    order = np.argsort(lams)
    v = np.asarray(vals)[order]
    if divergent:
        base_i = int(np.argmin(np.abs(np.log(lams))))
        far = vals[-1]
        rep.passed = far >= factor * vals[base_i]
        rep.messages.append(f"far-end value {far:.4g} vs {factor:g} x {vals[base_i]:.4g}")
        return rep
    steps = np.diff(v) if trend == "nondecreasing" else -np.diff(v)
    if np.any(steps < -rtol * np.abs(v[1:])):
        rep.passed = False
        rep.messages.append(f"values not {trend} within rtol {rtol:g}")
    hom = solver(SingularPower(gamma=g, angular=profile.omega), 1.0, spec)
    own = solver(profile, 1.0, spec)
    lo, hi = min(hom, own), max(hom, own)
    rep.bracket = (lo, hi)
    inside = [(1 - rtol) * lo <= x <= (1 + rtol) * hi for x in vals]
    if not all(inside):
        rep.passed = False
        rep.messages.append(f"values leave the bracket [{lo:.4g}, {hi:.4g}]")
    return rep
