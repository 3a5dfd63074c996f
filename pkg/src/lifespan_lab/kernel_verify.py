"""Numerical checks of the weighted heat smoothing estimate.

The decay rate in t of || |x|^g e^{tΔ}u ||_{q2} is measured on a fixed
grid in the self-similar variable y = x / sqrt(t): the datum is dilated,
evolved for unit time and the norm is rescaled back, so large t never
needs a larger box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import HypothesisViolated
from .field_core import NormSpec, make_grid, norm, sample_profile
from .profiles import DiracApprox, Profile, TailPower, dilate
from .scaling_laws import exponent_fit
from .semigroup import heat_step

CSV_HEADER = ("gamma", "mu_w", "q1", "q2", "predicted_slope", "fitted_slope", "max_ratio_deviation")

# (gamma, mu_w, q1, q2) rows in one dimension; the (0, 0.5, inf, 4) row has q1 > q2
KERNEL_MATRIX = (
    (0.0, 0.0, 1.0, math.inf),
    (0.0, 0.0, 1.0, 2.0),
    (0.25, 0.5, math.inf, math.inf),
    (0.5, 0.5, math.inf, math.inf),
    (0.0, 0.5, math.inf, math.inf),
    (0.25, 0.75, math.inf, math.inf),
    (0.0, 0.5, math.inf, 4.0),
)


def _inv(q: float) -> float:
    return 0.0 if q == math.inf else 1.0 / q


def predicted_slope(gamma: float, mu: float, q1: float, q2: float, N: int) -> float:
    return -(N / 2) * (_inv(q1) - _inv(q2)) - (mu - gamma) / 2


def check_kernel_hypotheses(gamma: float, mu: float, q1: float, q2: float, N: int) -> None:
    """Raise HypothesisViolated naming the first failed condition.

    gamma = mu = 0 is the unweighted estimate, which needs only q1 <= q2;
    gamma = mu with q1 = q2 is the equal-weight case.
    """
    if q1 < 1 or q2 < 1:
        raise HypothesisViolated("q1 and q2 must be at least 1")
    if gamma == 0 and mu == 0:
        if q1 > q2:
            raise HypothesisViolated("q1 <= q2 (unweighted case)")
        return
    if not 0 <= gamma <= mu < N:
        raise HypothesisViolated("0 <= gamma <= mu_w < N")
    if q1 <= 1:
        raise HypothesisViolated("q1 > 1")
    a, b = _inv(q1), _inv(q2)
    equal_weight = gamma == mu and q1 == q2
    if not equal_weight and not b < (mu - gamma) / N + a:
        raise HypothesisViolated("1/q2 < (mu_w - gamma)/N + 1/q1")
    if not mu / N + a < 1:
        raise HypothesisViolated("mu_w/N + 1/q1 < 1")


def default_datum(gamma: float, mu: float, q1: float, q2: float, N: int) -> Profile:
    """A datum whose large-t decay attains the predicted rate.

    The unweighted rows use a narrow Gaussian mass.  Weighted rows with
    q1 = inf use |x|^-mu with a tiny hole at the origin, so |x|^mu u is
    bounded.  The hole leaves a transient of relative size
    (radius/sqrt(t))^(N - mu), which decays too slowly for a t grid of
    [1, 64] unless the radius is far below the grid spacing.
    """
    if gamma == 0 and mu == 0:
        if q1 != 1:
            raise HypothesisViolated("the default datum for unweighted rows needs q1 = 1")
        return DiracApprox(mass=1.0, width=1e-2)
    if q1 != math.inf:
        raise HypothesisViolated("pass a test datum for weighted rows with finite q1")
    return TailPower(gamma=mu, radius=1e-6)


def _cutoff_scale(datum: Profile) -> float:
    if isinstance(datum, TailPower):
        return datum.radius
    if isinstance(datum, DiracApprox):
        return math.sqrt(datum.width)
    return 1.0


@dataclass
class KernelSlopeResult:
    gamma: float
    mu_w: float
    q1: float
    q2: float
    N: int
    predicted: float
    fitted: float
    half_width: float
    times: list
    ratios: list  # R(t) on the whole t grid
    window: list = field(default_factory=list)  # indices used in the fit
    max_ratio_deviation: float = 0.0

    def row(self) -> tuple:
        return (self.gamma, self.mu_w, self.q1, self.q2, self.predicted, self.fitted, self.max_ratio_deviation)

    def passed(self, rel: float = 0.05, abs_tol: float = 1e-3) -> bool:
        return abs(self.fitted - self.predicted) <= max(rel * abs(self.predicted), abs_tol)


def weighted_heat_norm(datum: Profile, t: float, gamma: float, q: float, N: int,
                       half_width: float = 40.0, spacing: float = 0.02) -> float:
    """|| |x|^gamma e^{tΔ} datum ||_q computed in the variable y = x / sqrt(t)."""
    n = 2 * int(round(half_width / spacing))
    grid = make_grid(N, half_width, n)
    s = math.sqrt(t)
    v = dilate(datum, s, 0.0, dimension=N)  # v(y) = datum(sqrt(t) y)
    w = heat_step(sample_profile(v, grid), 1.0)
    return s ** (gamma + N * _inv(q)) * norm(w, NormSpec(q, gamma))


def kernel_slope_experiment(gamma: float, mu: float, q1: float, q2: float, N: int = 1,
                            times: Sequence[float] | None = None, datum: Profile | None = None,
                            half_width: float | None = None, spacing: float | None = None) -> KernelSlopeResult:
    """Fit the decay exponent of R(t) = || |x|^gamma e^{tΔ}u ||_{q2} and compare with the prediction."""
    check_kernel_hypotheses(gamma, mu, q1, q2, N)
    datum = datum or default_datum(gamma, mu, q1, q2, N)
    times = list(times if times is not None else np.geomspace(1, 64, 7))
    half_width = half_width or (40.0 if N == 1 else 16.0)
    spacing = spacing or (0.02 if N == 1 else 0.1)
    R = [weighted_heat_norm(datum, t, gamma, q2, N, half_width, spacing) for t in times]
    start = max(1.0, 10 * _cutoff_scale(datum) ** 2)
    win = [i for i, t in enumerate(times) if t >= start]
    if len(win) < 2:
        win = list(range(len(times)))
    pred = predicted_slope(gamma, mu, q1, q2, N)
    fit = exponent_fit([(times[i], R[i]) for i in win])
    scaled = np.array([R[i] * times[i] ** (-pred) for i in win])
    dev = float(np.max(scaled) / np.min(scaled) - 1)
    return KernelSlopeResult(gamma, mu, q1, q2, N, pred, fit.slope, fit.half_width, times, R, win, dev)


@dataclass
class TranslationReport:
    gamma: float
    mu_w: float
    taus: list
    lhs: list
    rhs: list
    ratios: list
    slope: float
    growth: float  # last ratio over first
    expected: str  # "grows" or "bounded"
    passed: bool


def _gauss(points: np.ndarray, t: float) -> np.ndarray:
    n = points.shape[-1]
    r2 = np.sum(points * points, axis=-1)
    return (4 * math.pi * t) ** (-n / 2) * np.exp(-r2 / (4 * t))


def _weighted_lq(values: np.ndarray, weight: np.ndarray, q: float, cell: float) -> float:
    a = np.abs(values) * weight
    if q == math.inf:
        return float(np.max(a))
    return float(np.sum(a**q) * cell) ** (1 / q)


def translation_necessity_experiment(gamma: float, mu: float, q1: float, q2: float, N: int = 1,
                                     taus: Sequence[float] | None = None, factor: float = 10.0,
                                     half_width: float = 30.0, points_per_axis: int | None = None) -> TranslationReport:
    """Both sides of the smoothing estimate for a Gaussian translated by tau x0, at t = 1.

    The ratio lhs/rhs grows like tau^(gamma - mu) when gamma > mu.
    """
    if q1 == math.inf or q2 == math.inf:
        raise HypothesisViolated("the translation argument needs finite q1 and q2")
    taus = list(taus if taus is not None else np.geomspace(1, 1024, 11))
    n = points_per_axis or (6000 if N == 1 else 600)
    grid = make_grid(N, half_width, n)
    y = grid.points()
    x0 = np.zeros(N)
    x0[0] = 1.0
    g1, g2 = _gauss(y, 1.0), _gauss(y, 2.0)
    cell = grid.cell_volume
    lhs, rhs = [], []
    for tau in taus:
        r = np.sqrt(np.sum((y / tau + x0) ** 2, axis=-1))
        lhs.append(tau ** (-(mu - gamma)) * _weighted_lq(g2, r**gamma, q2, cell))
        rhs.append(_weighted_lq(g1, r**mu, q1, cell))
    ratios = [a / b for a, b in zip(lhs, rhs)]
    fit = exponent_fit(list(zip(taus, ratios)))
    growth = ratios[-1] / ratios[0]
    if gamma > mu:
        expected = "grows"
        ok = growth >= factor
    else:
        expected = "bounded"
        ok = max(ratios) <= factor * ratios[0]
    return TranslationReport(gamma, mu, taus, lhs, rhs, ratios, fit.slope, growth, expected, ok)


def run_matrix(rows=KERNEL_MATRIX, N: int = 1, times=None) -> list[KernelSlopeResult]:
    return [kernel_slope_experiment(g, m, q1, q2, N, times) for g, m, q1, q2 in rows]
