"""Analytic life-span bounds with explicit constants.

Every lower bound has the shape T = K * (lambda * n)^(-e) where ``n`` is
a norm of the datum, ``e`` an exact exponent and ``K`` a constant that is
either closed form, measured by quadrature, or supplied by the user.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy import optimize
from scipy.special import betaln

from .errors import (
    CriticalOrSubcritical,
    HypothesisViolated,
    IntegralDiverges,
    NegativeData,
    NoApplicableTheorem,
    SupercriticalForMeasures,
)
from .field_core import Grid
from .profiles import (
    BoundedBump,
    Constant,
    DiracApprox,
    MeasureDatum,
    SectorPsi0,
    SingularPower,
    TailPower,
    TruncatedSingular,
    TwoPower,
    lebesgue_norm,
    profile_to_config,
)
from .semigroup import heat_sup, scaled_sup_constant, weighted_heat_sup

INF = math.inf


@dataclass(frozen=True)
class ProblemSpec:
    N: int = 1
    alpha: float = 1.0
    l: float = 0.0
    m: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.l > -min(2, self.N):
            raise ValueError("need l > -min(2, N)")
        if not 0 <= self.m <= self.N:
            raise ValueError("need 0 <= m <= N")


@dataclass(frozen=True)
class CriticalExponents:
    q_c: float | None
    q_c_gamma: float | None
    q_c_l: float | None
    q_c_gamma_l: float | None
    q_F: float | None
    absent: dict = field(default_factory=dict)


def critical_exponents(spec: ProblemSpec, gamma: float = 0.0) -> CriticalExponents:
    N, a, l = spec.N, spec.alpha, spec.l
    absent = {}
    q_c = N * a / 2
    if gamma * a < 2:
        q_cg = N * a / (2 - gamma * a)
    else:
        q_cg = None
        absent["q_c_gamma"] = "needs gamma * alpha < 2"
    q_cl = N * a / (2 + l)
    if 2 + l - gamma * a > 0:
        q_cgl = N * a / (2 + l - gamma * a)
    else:
        q_cgl = None
        absent["q_c_gamma_l"] = "needs gamma * alpha < 2 + l"
    return CriticalExponents(q_c, q_cg, q_cl, q_cgl, N * a / (2 + l), absent)


@dataclass
class LowerBound:
    name: str
    T: float | None
    exponent: float
    constant: float | None
    provenance: str  # analytic | numeric-quadrature | configured
    detail: dict = field(default_factory=dict)


@dataclass
class UpperBound:
    T: float | None
    horizon: float
    name: str = "necessary_condition"


@dataclass
class Asymptotic:
    constant: float
    exponent: float
    direction: str
    name: str


@dataclass
class BoundReport:
    problem: ProblemSpec
    datum: dict
    lam: float
    lower: list = field(default_factory=list)
    upper: UpperBound | None = None
    asymptotic: Asymptotic | None = None
    inapplicable: dict = field(default_factory=dict)

    def best_lower(self, include_supersolution: bool = False) -> LowerBound | None:
        """Largest lower bound from the contraction estimates.

        The supersolution bound is used only when asked for, or when no
        contraction estimate applies (sector data).
        """
        vals = [b for b in self.lower if b.T is not None]
        if not include_supersolution:
            main = [b for b in vals if b.name != "supersolution"]
            vals = main or vals
        return max(vals, key=lambda b: b.T) if vals else None

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return clean({
            "problem": asdict(self.problem),
            "datum": self.datum,
            "lambda": self.lam,
            "lower": [
                {"name": b.name, "T": b.T, "exponent": b.exponent, "constant": b.constant,
                 "provenance": b.provenance}
                for b in self.lower
            ],
            "upper": None if self.upper is None else {"T": self.upper.T, "horizon": self.upper.horizon},
            "asymptotic": None if self.asymptotic is None else {
                "constant": self.asymptotic.constant, "exponent": self.asymptotic.exponent,
                "direction": self.asymptotic.direction, "name": self.asymptotic.name},
            "inapplicable": self.inapplicable,
        })


# contraction constants

def choose_r(q: float, alpha: float) -> float:
    if q == INF:
        return INF
    return q * (alpha + 1) if q < alpha + 1 else q


def contraction_constant(alpha: float, q: float, r: float, N: int) -> float:
    """2(a+1)(4pi)^(-Na/2r) * Beta(1 - Na/2r, 1 - beta(a+1))."""
    a_exp = 0.0 if r == INF else N * alpha / (2 * r)
    beta = (N / 2) * ((0.0 if q == INF else 1 / q) - (0.0 if r == INF else 1 / r))
    b_exp = beta * (alpha + 1)
    if a_exp >= 1 or b_exp >= 1:
        raise IntegralDiverges(f"Beta integral exponents {a_exp:.4g}, {b_exp:.4g} must be < 1")
    return 2 * (alpha + 1) * (4 * math.pi) ** (-a_exp) * math.exp(betaln(1 - a_exp, 1 - b_exp))


def _power_bound(name, lam_norm, exponent, constant, provenance, **detail) -> LowerBound:
    if constant is None:
        return LowerBound(name, None, exponent, None, provenance, detail)
    if lam_norm == 0:
        return LowerBound(name, INF, exponent, constant, provenance, detail)
    return LowerBound(name, constant * lam_norm ** (-exponent), exponent, constant, provenance, detail)


def _require_plain(spec: ProblemSpec):
    if spec.l != 0 or spec.m != 0:
        raise HypothesisViolated("this bound is for l = 0 without sector structure")


def lower_bound_lebesgue(lam: float, norm_q: float, spec: ProblemSpec, q: float) -> LowerBound:
    _require_plain(spec)
    N, a = spec.N, spec.alpha
    if q < 1:
        raise HypothesisViolated("q >= 1")
    if not q > N * a / 2:
        raise CriticalOrSubcritical(f"q = {q} is not above q_c = {N * a / 2}")
    r = choose_r(q, a)
    beta = (N / 2) * ((0.0 if q == INF else 1 / q) - (0.0 if r == INF else 1 / r))
    theta = 1 - (0.0 if q == INF else N * a / (2 * q))
    C = contraction_constant(a, q, r, N)
    const = (2 ** (a + 1) * (4 * math.pi) ** (a * beta) * C) ** (-1 / theta)
    return _power_bound("lebesgue", lam * norm_q, a / theta, const, "analytic", q=q, r=r)


def lower_bound_measure(lam: float, mass: float, spec: ProblemSpec) -> LowerBound:
    _require_plain(spec)
    N, a = spec.N, spec.alpha
    if not a < 2 / N:
        raise SupercriticalForMeasures("q_c >= 1: needs alpha < 2/N")
    r = a + 1
    beta = (N / 2) * (1 - 1 / r)
    theta = 1 - N * a / 2
    C = contraction_constant(a, 1.0, r, N)
    const = (2 ** (a + 1) * (4 * math.pi) ** (a * beta) * C) ** (-1 / theta)
    return _power_bound("measure", lam * mass, a / theta, const, "analytic", r=r)


def lower_bound_singular(lam: float, L: float, alpha: float, gamma: float, N: int) -> LowerBound:
    """Bound for |phi| <= |x|^-gamma with L the L^r norm of e^Δ|x|^-gamma, r = (N/gamma)(alpha+1)."""
    if not 0 < gamma < N:
        raise HypothesisViolated("0 < gamma < N")
    if not gamma < 2 / alpha:
        raise HypothesisViolated("gamma < 2/alpha")
    q = N / gamma
    r = q * (alpha + 1)
    C = contraction_constant(alpha, q, r, N)
    theta = 1 - gamma * alpha / 2
    const = (2 ** (alpha + 1) * C) ** (-1 / theta)
    return _power_bound("singular_power", lam * L, alpha / theta, const, "numeric-quadrature", r=r)


@lru_cache(maxsize=128)
def singular_L(gamma: float, alpha: float, N: int) -> float:
    return scaled_sup_constant(gamma, None, N, r=(N / gamma) * (alpha + 1))


def _weighted_check(spec: ProblemSpec, q: float, gamma: float) -> list[str]:
    N, a, l = spec.N, spec.alpha, spec.l
    fails = []
    if not 0 < gamma < N:
        fails.append("0 < gamma < N")
    iq = 0.0 if q == INF else 1 / q
    if not iq + gamma / N < 1:
        fails.append("1/q + gamma/N < 1")
    if not N * a * iq / 2 + gamma * a / 2 - l / 2 < 1:
        fails.append("N alpha/2q + alpha gamma/2 - l/2 < 1")
    if l == 0 and not gamma < 2 / a:
        fails.append("gamma < 2/alpha")
    if l > 0 and not gamma * a >= l:
        fails.append("gamma >= l/alpha")
    return fails


@lru_cache(maxsize=128)
def weighted_sup_constants(gamma: float, alpha: float, l: float, N: int) -> dict:
    """Constants of the weighted L^inf contraction with auxiliary weight nu.

    With nu (alpha+1) = gamma + l the nonlinearity maps the nu-weighted sup
    ball back onto multiples of |x|^-gamma, so both estimates reduce to
    sups of |x|^w e^Δ|x|^-gamma, found by radial quadrature.
    """
    nu = (gamma + l) / (alpha + 1)
    b = (gamma - nu) / 2
    theta = 1 - (gamma * alpha - l) / 2
    if nu < 0 or b < 0 or b >= 1 or theta <= 0:
        raise HypothesisViolated("weighted sup contraction needs 0 <= nu <= gamma and theta > 0")
    A = weighted_heat_sup(gamma, gamma, N)
    B = A if b == 0 else weighted_heat_sup(gamma, nu, N)
    beta_int = math.exp(betaln(1 - b, theta))
    C1 = max(A / theta, B * beta_int)
    return {"A": A, "B": B, "nu": nu, "theta": theta, "C": 2 * (alpha + 1) * C1}


def _weighted_inf_bound(name: str, lam: float, norm_g: float, spec: ProblemSpec, gamma: float) -> LowerBound:
    c = weighted_sup_constants(float(gamma), spec.alpha, float(spec.l), spec.N)
    a, theta = spec.alpha, c["theta"]
    K = max(c["A"], c["B"]) * lam * norm_g
    const = (2 ** (a + 1) * c["C"]) ** (-1 / theta)
    return _power_bound(name, K, a / theta, const, "numeric-quadrature", gamma=gamma, nu=c["nu"],
                        prefactor=max(c["A"], c["B"]))


def lower_bound_weighted(lam: float, norm_qg: float, spec: ProblemSpec, q: float, gamma: float,
                         configured_constant: float | None = None) -> LowerBound:
    _require_plain(spec)
    fails = _weighted_check(spec, q, gamma)
    if fails:
        raise HypothesisViolated("failed: " + "; ".join(fails))
    a, N = spec.alpha, spec.N
    e = 1 / (1 / a - (0.0 if q == INF else N / (2 * q)) - gamma / 2)
    if q == INF and configured_constant is None:
        return _weighted_inf_bound("weighted", lam, norm_qg, spec, gamma)
    prov = "configured"
    return _power_bound("weighted", lam * norm_qg, e, configured_constant, prov, q=q, gamma=gamma)


def lower_bound_hardy_henon(lam: float, norm: float, spec: ProblemSpec, q: float, gamma: float = 0.0,
                            configured_constant: float | None = None) -> LowerBound:
    N, a, l = spec.N, spec.alpha, spec.l
    if l == 0:
        raise HypothesisViolated("needs l != 0")
    iq = 0.0 if q == INF else 1 / q
    if l < 0 and gamma == 0:
        q_cl = N * a / (2 + l)
        if not (q > q_cl and q > 1):
            raise HypothesisViolated(f"q > q_c(l) = {q_cl:.6g} and q > 1")
        e = 1 / ((2 + l) / (2 * a) - N * iq / 2)
        if q == INF and configured_constant is None:
            P = scaled_sup_constant(-l, None, N)
            theta = 1 + l / 2
            C = 2 * (a + 1) * P / theta
            const = (2 ** (a + 1) * C) ** (-1 / theta)
            return _power_bound("hardy", lam * norm, e, const, "numeric-quadrature", q=q)
        return _power_bound("hardy", lam * norm, e, configured_constant, "configured", q=q)
    if l > 0 and abs(gamma - l / a) < 1e-14:
        if not 0 < gamma < N:
            raise HypothesisViolated("0 < l/alpha < N")
        if not q > N * a / 2:
            raise HypothesisViolated(f"q > q_c = {N * a / 2:.6g}")
        e = 1 / (1 / a - N * iq / 2)
        name = "henon"
    else:
        if not l / a < gamma < (2 + l) / a:
            raise HypothesisViolated("l/alpha < gamma < (2+l)/alpha")
        fails = _weighted_check(spec, q, gamma)
        if fails:
            raise HypothesisViolated("failed: " + "; ".join(fails))
        e = 1 / ((2 + l) / (2 * a) - N * iq / 2 - gamma / 2)
        name = "hardy_henon_weighted"
    if q == INF and configured_constant is None:
        b = _weighted_inf_bound(name, lam, norm, spec, gamma)
        b.exponent = e
        return b
    return _power_bound(name, lam * norm, e, configured_constant, "configured", q=q, gamma=gamma)


def lower_bound_combined(lam: float, norms: dict, spec: ProblemSpec, q: float, p: float, gamma: float,
                         weighted_constant: float | None = None) -> LowerBound:
    """Better of the weighted (q, gamma) and Lebesgue p bounds, with the piecewise exponent."""
    _require_plain(spec)
    N, a = spec.N, spec.alpha
    s_w = (0.0 if q == INF else 1 / q) + gamma / N
    s_p = 0.0 if p == INF else 1 / p
    s = max(s_w, s_p) if lam <= 1 else min(s_w, s_p)
    e = 1 / (1 / a - N * s / 2)
    cands = []
    if "weighted" in norms:
        cands.append(lower_bound_weighted(lam, norms["weighted"], spec, q, gamma, weighted_constant))
    if "lebesgue" in norms:
        cands.append(lower_bound_lebesgue(lam, norms["lebesgue"], spec, p))
    vals = [c for c in cands if c.T is not None]
    if not vals:
        raise HypothesisViolated("no usable single-space bound")
    best = max(vals, key=lambda c: c.T)
    return LowerBound("combined", best.T, e, best.constant, best.provenance,
                      {"from": best.name, "branch": "small" if lam <= 1 else "large"})


def sector_exponent(m: int, gamma: float, alpha: float) -> float:
    if m < 0:
        raise HypothesisViolated("m >= 0")
    d = 1 / alpha - (gamma + m) / 2
    if m >= 1 and not alpha < 2 / (gamma + m):
        if abs(d) < 1e-15:
            return INF
        raise HypothesisViolated("alpha < 2/(gamma + m)")
    return INF if d == 0 else 1 / d


def diffusivity_bound(mu: float, norm_q: float, spec: ProblemSpec, q: float, lam: float = 1.0) -> LowerBound:
    """Lower bound for u_t = mu Δu + |u|^alpha u via the rescaled datum."""
    if not mu > 0:
        raise ValueError("diffusivity must be positive")
    scale = 1.0 if q == INF else mu ** (-spec.N / (2 * q))
    b = lower_bound_lebesgue(lam, norm_q * scale, spec, q)
    b.name = "diffusivity"
    return b


# heat flow sup as a function of time, shared by the supersolution and necessary-condition bounds

def heat_sup_curve(profile, spec: ProblemSpec, grid: Grid | None = None):
    N = spec.N

    def h(t):
        return heat_sup(profile, t, N, grid)

    return h


def _check_sign(profile, spec: ProblemSpec):
    if isinstance(profile, MeasureDatum):
        if profile.mass < 0:
            raise NegativeData("negative mass")
        return
    if profile.lam < 0:
        raise NegativeData("negative multiplier")
    if isinstance(profile, SectorPsi0):
        return
    for name in ("c", "amplitude", "mass"):
        v = getattr(profile, name, None)
        if v is not None and v < 0:
            raise NegativeData(f"{name} is negative")
    om = getattr(profile, "angular", None)
    if om is not None and om.signed:
        raise NegativeData("signed angular part takes negative values")


@lru_cache(maxsize=64)
def _supersolution_table(profile, N: int, alpha: float, m: int):
    # tabulate I(T) = int_0^T ||e^{sΔ}phi||^alpha ds on a log grid
    s = np.geomspace(1e-12, 1e8, 241)
    h = np.array([heat_sup(profile, float(t), N) for t in s]) ** alpha
    # near 0 the sup behaves like a power of s
    k = math.log(h[1] / h[0]) / math.log(s[1] / s[0]) if h[0] > 0 and h[1] > 0 else 0.0
    k = min(k, 0.0)
    if k <= -1:
        raise IntegralDiverges("sup of the heat flow is not integrable at t = 0")
    first = h[0] * s[0] / (1 + k)
    # exact integral of the power law through each pair of neighbouring nodes
    ratio = s[1:] / s[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        kk = np.log(h[1:] / h[:-1]) / np.log(ratio)
        seg = np.where(np.abs(kk + 1) > 1e-9, h[:-1] * s[:-1] * (ratio ** (kk + 1) - 1) / (kk + 1),
                       h[:-1] * s[:-1] * np.log(ratio))
    seg = np.where(np.isfinite(seg), seg, 0.5 * (h[1:] + h[:-1]) * (s[1:] - s[:-1]))
    cum = first + np.concatenate([[0.0], np.cumsum(seg)])
    return s, cum


def lower_bound_supersolution(profile, lam: float, spec: ProblemSpec) -> LowerBound:
    """T with alpha lam^alpha int_0^T ||e^{sΔ}phi||_inf^alpha ds = 1.

    Below this time the explicit supersolution e^{tΔ}u0 (1 - alpha int ...)^(-1/alpha)
    stays finite, so the solution exists.
    """
    if spec.l != 0:
        raise HypothesisViolated("needs l = 0")
    _check_sign(profile, spec)
    if lam == 0:
        return LowerBound("supersolution", INF, float("nan"), None, "numeric-quadrature")
    s, cum = _supersolution_table(profile, spec.N, spec.alpha, spec.m)
    target = 1 / (spec.alpha * lam**spec.alpha)
    if target >= cum[-1]:
        return LowerBound("supersolution", float(s[-1]), float("nan"), None, "numeric-quadrature",
                          {"capped": True})
    if target <= cum[0]:
        # inside the power-law head: I(T) = cum0 (T/s0)^(1+k)
        k = math.log(cum[1] / cum[0]) / math.log(s[1] / s[0])
        T = s[0] * (target / cum[0]) ** (1 / k)
    else:
        T = float(np.exp(np.interp(math.log(target), np.log(cum), np.log(s))))
    # interpolation error in log space is tiny but not signed; shave it off
    return LowerBound("supersolution", T * (1 - 1e-3), float("nan"), None, "numeric-quadrature")


def upper_bound_necessary(profile, lam: float, spec: ProblemSpec, horizon: float,
                          grid: Grid | None = None, levels: int = 60) -> UpperBound:
    """Smallest t <= horizon where alpha lam^alpha t ||e^{tΔ}phi||_inf^alpha exceeds 1."""
    _check_sign(profile, spec)
    if spec.l != 0:
        raise NoApplicableTheorem("the necessary-condition search is implemented for l = 0")
    if lam <= 0:
        return UpperBound(None, horizon)
    a = spec.alpha
    h = heat_sup_curve(profile, spec, grid)
    t_min = horizon * 2.0 ** (-levels)
    if grid is not None:
        t_min = max(t_min, grid.spacing**2 / 4)

    def excess(t):
        return math.log(a * t) + a * math.log(lam * h(t)) if h(t) > 0 else -INF

    ts = horizon * 2.0 ** (-np.arange(levels, -1, -1, dtype=float))
    ts = ts[ts >= t_min]
    prev = None
    for t in ts:
        if excess(t) > 0:
            if prev is None:
                return UpperBound(float(t), horizon)
            root = optimize.brentq(excess, prev, t, xtol=1e-14, rtol=1e-12)
            return UpperBound(root * (1 + 1e-10), horizon)
        prev = t
    return UpperBound(None, horizon)


# asymptotic constants

def _sector_L(profile: SectorPsi0, N: int) -> float:
    base = SectorPsi0(m=profile.m, gamma=profile.gamma)
    return heat_sup(base, 1.0, N)


def upper_bound_scaling(profile, lam: float, spec: ProblemSpec, T_unit: float) -> UpperBound:
    """lam^-e T(phi) from the dilation identity and comparison.

    Valid for lam > 1 when mu^g D_mu phi grows as mu shrinks (data
    truncated outside a ball) and for lam < 1 for data vanishing near the
    origin; ``T_unit`` is the life-span at lam = 1.
    """
    if isinstance(profile, (TruncatedSingular, SingularPower)):
        ok = lam >= 1
    elif isinstance(profile, TailPower):
        ok = lam <= 1
    else:
        raise NoApplicableTheorem("the scaling upper bound needs a cut-off power datum")
    if not ok:
        raise NoApplicableTheorem("lambda lies on the wrong side of 1 for this datum")
    sigma = (2 + spec.l) / spec.alpha
    g = profile.gamma
    if not (g < sigma and g < spec.N):
        raise HypothesisViolated("needs gamma < (2+l)/alpha and gamma < N")
    if spec.l and not spec.l / spec.N < spec.alpha < (2 + spec.l) / spec.N:
        raise HypothesisViolated("needs l/N < alpha < (2+l)/N")
    e = 2 / (sigma - g)
    return UpperBound(lam ** (-e) * T_unit, math.inf, "scaling")


def asymptotic_constants(profile, direction: str, spec: ProblemSpec) -> Asymptotic:
    """limsup of lambda^e T_max(lambda phi) in the given direction, from the necessary condition."""
    if direction not in ("to_zero", "to_infinity"):
        raise ValueError("direction must be to_zero or to_infinity")
    if spec.l != 0:
        raise NoApplicableTheorem("no asymptotic upper constant for l != 0")
    N, a = spec.N, spec.alpha
    lam = getattr(profile, "lam", 1.0)

    def power_case(L, gamma, name):
        d = 1 / a - gamma / 2
        if d <= 0:
            raise NoApplicableTheorem("needs gamma < 2/alpha")
        e = 1 / d
        return Asymptotic((a ** (1 / a) * L) ** (-e), e, direction, name)

    if isinstance(profile, SectorPsi0):
        if direction == "to_zero" and profile.epsilon is not None:
            raise NoApplicableTheorem("truncated sector data have no small-lambda law")
        e = sector_exponent(profile.m, profile.gamma, a)
        L = lam * _sector_L(profile, N)
        return Asymptotic((a ** (1 / a) * L) ** (-e), e, direction, "sector")
    if isinstance(profile, (MeasureDatum, DiracApprox)) or (isinstance(profile, BoundedBump) and direction == "to_zero"):
        if direction != "to_zero":
            raise NoApplicableTheorem("measure data are covered for small lambda")
        if not a < 2 / N:
            raise NoApplicableTheorem("needs alpha < 2/N")
        mass = profile.mass if isinstance(profile, MeasureDatum) else lebesgue_norm(profile, 1.0, 0.0, N)
        if isinstance(profile, DiracApprox):
            mass = abs(profile.lam * profile.mass)
        e = 1 / (1 / a - N / 2)
        return Asymptotic((a ** (1 / a) * (4 * math.pi) ** (-N / 2) * mass) ** (-e), e, direction, "measure")
    if isinstance(profile, (BoundedBump, Constant)):
        sup = lebesgue_norm(profile, INF, 0.0, N)
        return Asymptotic(1 / (a * sup**a), a, direction, "bounded")
    if isinstance(profile, SingularPower):
        L = lam * scaled_sup_constant(profile.gamma, profile.angular, N)
        return power_case(L, profile.gamma, "homogeneous")
    if isinstance(profile, TruncatedSingular) and direction == "to_infinity":
        L = lam * scaled_sup_constant(profile.gamma, profile.angular, N)
        return power_case(L, profile.gamma, "singular_at_origin")
    if isinstance(profile, TailPower) and direction == "to_zero":
        L = lam * scaled_sup_constant(profile.gamma, profile.angular, N)
        return power_case(L, profile.gamma, "power_tail")
    if isinstance(profile, TwoPower):
        if direction == "to_infinity":
            L = lam * scaled_sup_constant(profile.gamma1, profile.angular, N)
            return power_case(L, profile.gamma1, "two_power_inner")
        coef = profile.radius ** (profile.gamma2 - profile.gamma1)
        L = lam * coef * scaled_sup_constant(profile.gamma2, profile.angular, N)
        return power_case(L, profile.gamma2, "two_power_outer")
    raise NoApplicableTheorem(f"no asymptotic statement for {type(profile).__name__} {direction}")


# report assembly

def _datum_gammas(profile) -> list[float]:
    if isinstance(profile, (SingularPower, TruncatedSingular, TailPower)):
        return [profile.gamma]
    if isinstance(profile, TwoPower):
        return sorted({profile.gamma1, profile.gamma2})
    return []


def collect_lower_bounds(profile, lam: float, spec: ProblemSpec,
                         q_values: Iterable[float] = (1.0, 2.0, INF),
                         configured: dict | None = None) -> tuple[list[LowerBound], dict]:
    """Every lower bound whose hypotheses hold for this datum, plus reasons for the rest."""
    configured = configured or {}
    N, a = spec.N, spec.alpha
    out, skipped = [], {}

    def attempt(key, fn):
        try:
            b = fn()
            if b is not None:
                out.append(b)
        except (HypothesisViolated, CriticalOrSubcritical, SupercriticalForMeasures,
                IntegralDiverges, NoApplicableTheorem, NegativeData, NotImplementedError, ValueError) as exc:
            skipped[key] = str(exc) or type(exc).__name__

    measure_like = isinstance(profile, MeasureDatum)
    plain = spec.l == 0 and spec.m == 0 and not isinstance(profile, SectorPsi0)

    if plain and not measure_like:
        for q in q_values:
            def leb(q=q):
                n = lebesgue_norm(profile, q, 0.0, N)
                if not math.isfinite(n):
                    raise HypothesisViolated(f"datum not in L^{q}")
                return lower_bound_lebesgue(lam, n, spec, q)
            attempt(f"lebesgue_q{q}", leb)
    if plain:
        def meas():
            mass = profile.mass if measure_like else lebesgue_norm(profile, 1.0, 0.0, N)
            if not math.isfinite(mass):
                raise HypothesisViolated("datum is not a finite measure")
            if not a < 2 / N:
                raise SupercriticalForMeasures("q_c >= 1")
            return lower_bound_measure(lam, mass, spec)
        attempt("measure", meas)
        for g in _datum_gammas(profile):
            def weighted(g=g):
                n = lebesgue_norm(profile, INF, g, N)
                if not math.isfinite(n):
                    raise HypothesisViolated(f"datum not in weighted L^inf with gamma = {g}")
                return lower_bound_weighted(lam, n, spec, INF, g)
            attempt(f"weighted_gamma{g}", weighted)

            def singular(g=g):
                c = lebesgue_norm(profile, INF, g, N)
                if not math.isfinite(c):
                    raise HypothesisViolated(f"datum not dominated by |x|^-{g}")
                return lower_bound_singular(lam * c, singular_L(g, a, N), a, g, N)
            attempt(f"singular_gamma{g}", singular)
            for q in q_values:
                if q == INF or ("weighted", q, g) not in configured:
                    continue
                attempt(f"weighted_q{q}_gamma{g}", lambda q=q, g=g: lower_bound_weighted(
                    lam, lebesgue_norm(profile, q, g, N), spec, q, g, configured[("weighted", q, g)]))
    if spec.l != 0 and not measure_like:
        gammas = _datum_gammas(profile) or [0.0]
        for g in sorted(set(gammas + [0.0])):
            def hh(g=g):
                n = lebesgue_norm(profile, INF, g, N)
                if not math.isfinite(n):
                    raise HypothesisViolated(f"datum not in weighted L^inf with gamma = {g}")
                return lower_bound_hardy_henon(lam, n, spec, INF, g)
            attempt(f"hardy_henon_gamma{g}", hh)
        if spec.l > 0:
            g = spec.l / a
            attempt("henon", lambda: lower_bound_hardy_henon(
                lam, lebesgue_norm(profile, INF, g, N), spec, INF, g))
    if spec.l == 0:
        attempt("supersolution", lambda: lower_bound_supersolution(profile, lam, spec))
    return out, skipped


def report_bounds(profile, lam: float, spec: ProblemSpec, horizon: float | None = None,
                  grid: Grid | None = None, direction: str | None = None, **kw) -> BoundReport:
    lower, skipped = collect_lower_bounds(profile, lam, spec, **kw)
    try:
        datum = profile_to_config(profile)
    except TypeError:
        datum = {"kind": type(profile).__name__}
    rep = BoundReport(spec, datum, lam, lower, inapplicable=skipped)
    if horizon is not None:
        try:
            rep.upper = upper_bound_necessary(profile, lam, spec, horizon, grid)
        except (NoApplicableTheorem, NegativeData, ValueError) as exc:
            rep.inapplicable["upper"] = str(exc)
    if direction is not None:
        try:
            rep.asymptotic = asymptotic_constants(profile, direction, spec)
        except NoApplicableTheorem as exc:
            rep.inapplicable["asymptotic"] = str(exc)
    return rep
