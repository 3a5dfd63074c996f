"""Symbolic initial data.

Every datum is a small immutable description with a closed-form
evaluator, so dilations are exact and never resample a grid.  All
variants carry a scalar multiplier ``lam`` that multiplies the values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import ConfigInvalid, EvaluationAtSingularity, NonIntegrableSingularity


@dataclass(frozen=True)
class AngularPart:
    """Homogeneous degree-0 factor.

    ``constant_one`` is 1; ``first_coordinate_ratio`` is |x1|/|x| (or the
    signed x1/|x| when ``signed`` is set, as needed by sector data).
    ``custom`` wraps a user function of the points array.
    """

    kind: str = "constant_one"
    signed: bool = False
    func: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in ("constant_one", "first_coordinate_ratio", "custom"):
            raise ValueError(f"unknown angular kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom angular part needs func")

    @property
    def is_radial(self) -> bool:
        return self.kind == "constant_one"

    def value(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        if self.kind == "constant_one":
            return np.ones(x.shape[:-1])
        if self.kind == "custom":
            return np.asarray(self.func(x), dtype=float)
        r = np.sqrt(np.sum(x * x, axis=-1))
        with np.errstate(invalid="ignore", divide="ignore"):
            x1 = x[..., 0] if self.signed else np.abs(x[..., 0])
            return np.where(r > 0, x1 / np.where(r > 0, r, 1.0), 0.0)

    def sup(self) -> float:
        return 1.0


ONE = AngularPart()


@dataclass(frozen=True)
class Profile:
    lam: float = field(default=1.0, kw_only=True)

    # metadata used by the grid and bound code
    @property
    def singular_order(self) -> float:
        """Power of the singularity at the origin (0 if bounded)."""
        return 0.0

    @property
    def antisymmetry_axes(self) -> int:
        return 0

    @property
    def omega(self) -> AngularPart:
        return ONE

    def discontinuity_radii(self) -> tuple[float, ...]:
        return ()

    def support_radius(self) -> float:
        return math.inf

    def scaled(self, c: float) -> "Profile":
        return replace(self, lam=self.lam * c)

    def _raw(self, x: np.ndarray, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values(self, points) -> np.ndarray:
        """Vectorized evaluation on an array of shape (..., N)."""
        x = np.asarray(points, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        r = np.sqrt(np.sum(x * x, axis=-1))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.lam * self._raw(x, r)


@dataclass(frozen=True)
class Constant(Profile):
    c: float = 1.0

    def _raw(self, x, r):
        return np.full(r.shape, float(self.c))


@dataclass(frozen=True)
class BoundedBump(Profile):
    """amplitude * exp(-|x|^2 / width^2)."""

    amplitude: float = 1.0
    width: float = 1.0

    def _raw(self, x, r):
        return self.amplitude * np.exp(-(r / self.width) ** 2)


@dataclass(frozen=True)
class DiracApprox(Profile):
    """mass * G_width, the heat kernel at time ``width``; width 0 is a point mass."""

    mass: float = 1.0
    width: float = 1e-3

    def _raw(self, x, r):
        if self.width <= 0:
            raise EvaluationAtSingularity("a point mass has no pointwise values")
        n = x.shape[-1]
        return self.mass * (4 * math.pi * self.width) ** (-n / 2) * np.exp(-r * r / (4 * self.width))


@dataclass(frozen=True)
class SingularPower(Profile):
    """omega(x) |x|^-gamma on the whole space."""

    gamma: float = 0.5
    angular: AngularPart = ONE

    @property
    def singular_order(self):
        return self.gamma

    @property
    def omega(self):
        return self.angular

    def _raw(self, x, r):
        return self.angular.value(x) * r ** (-self.gamma)


@dataclass(frozen=True)
class TruncatedSingular(Profile):
    """omega |x|^-gamma for |x| <= epsilon, zero outside."""

    gamma: float = 0.5
    angular: AngularPart = ONE
    epsilon: float = 1.0

    @property
    def singular_order(self):
        return self.gamma

    @property
    def omega(self):
        return self.angular

    def discontinuity_radii(self):
        return (self.epsilon,)

    def support_radius(self):
        return self.epsilon

    def _raw(self, x, r):
        return np.where(r <= self.epsilon, self.angular.value(x) * r ** (-self.gamma), 0.0)


@dataclass(frozen=True)
class TailPower(Profile):
    """omega |x|^-gamma for |x| >= radius, zero inside."""

    gamma: float = 0.5
    angular: AngularPart = ONE
    radius: float = 1.0

    @property
    def omega(self):
        return self.angular

    def discontinuity_radii(self):
        return (self.radius,)

    def _raw(self, x, r):
        return np.where(r >= self.radius, self.angular.value(x) * r ** (-self.gamma), 0.0)


@dataclass(frozen=True)
class TwoPower(Profile):
    """omega |x|^-gamma1 inside ``radius`` and the continuous |x|^-gamma2 branch outside."""

    gamma1: float = 0.25
    gamma2: float = 0.75
    angular: AngularPart = ONE
    radius: float = 1.0

    @property
    def singular_order(self):
        return self.gamma1

    @property
    def omega(self):
        return self.angular

    def _raw(self, x, r):
        inner = r ** (-self.gamma1)
        outer = self.radius ** (self.gamma2 - self.gamma1) * r ** (-self.gamma2)
        return self.angular.value(x) * np.where(r <= self.radius, inner, outer)


def sector_constant(m: int, gamma: float) -> float:
    """gamma (gamma + 2) ... (gamma + 2m - 2)."""
    return math.prod(gamma + 2 * k for k in range(m))


@dataclass(frozen=True)
class SectorPsi0(Profile):
    """c x1...xm |x|^(-gamma-2m), optionally cut off outside |x| <= epsilon."""

    m: int = 1
    gamma: float = 0.5
    epsilon: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("sector index must be at least 1")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def singular_order(self):
        # integrability is measured against the weight x1...xm
        return self.gamma

    @property
    def antisymmetry_axes(self):
        return self.m

    def discontinuity_radii(self):
        return () if self.epsilon is None else (self.epsilon,)

    def support_radius(self):
        return math.inf if self.epsilon is None else self.epsilon

    def _raw(self, x, r):
        if x.shape[-1] < self.m:
            raise ValueError("sector index exceeds the dimension")
        prod = np.prod(x[..., : self.m], axis=-1)
        v = sector_constant(self.m, self.gamma) * prod * r ** (-self.gamma - 2 * self.m)
        if self.epsilon is not None:
            v = np.where(r <= self.epsilon, v, 0.0)
        return v


@dataclass(frozen=True)
class MeasureDatum:
    """A point mass at the origin; ``as_profile`` gives its grid stand-in."""

    mass: float = 1.0

    def as_profile(self, width: float) -> DiracApprox:
        return DiracApprox(mass=self.mass, width=width)


SINGULAR_TYPES = (SingularPower, TruncatedSingular, TwoPower, SectorPsi0)


def is_singular(profile: Profile) -> bool:
    return profile.singular_order > 0


def evaluate(profile: Profile, x) -> float:
    """Value of ``profile`` at a single point."""
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if is_singular(profile) and not np.any(pt):
        raise EvaluationAtSingularity(f"{type(profile).__name__} is singular at the origin")
    return float(profile.values(pt))


def dilate(profile: Profile, mu: float, weight_power: float, dimension: int | None = None) -> Profile:
    """Exact symbolic form of mu**weight_power * profile(mu x)."""
    if not mu > 0:
        raise ValueError("dilation factor must be positive")
    lam = profile.lam
    if isinstance(profile, Constant):
        return replace(profile, lam=lam * mu**weight_power)
    if isinstance(profile, BoundedBump):
        return replace(profile, width=profile.width / mu, lam=lam * mu**weight_power)
    if isinstance(profile, SingularPower):
        return replace(profile, lam=lam * mu ** (weight_power - profile.gamma))
    if isinstance(profile, TruncatedSingular):
        return replace(profile, epsilon=profile.epsilon / mu, lam=lam * mu ** (weight_power - profile.gamma))
    if isinstance(profile, TailPower):
        return replace(profile, radius=profile.radius / mu, lam=lam * mu ** (weight_power - profile.gamma))
    if isinstance(profile, TwoPower):
        return replace(profile, radius=profile.radius / mu, lam=lam * mu ** (weight_power - profile.gamma1))
    if isinstance(profile, SectorPsi0):
        eps = None if profile.epsilon is None else profile.epsilon / mu
        return replace(profile, epsilon=eps, lam=lam * mu ** (weight_power - profile.gamma - profile.m))
    if isinstance(profile, DiracApprox):
        if dimension is None:
            raise ValueError("dilating a Gaussian mass needs the dimension")
        return replace(profile, width=profile.width / mu**2, lam=lam * mu ** (weight_power - dimension))
    raise TypeError(f"cannot dilate {type(profile).__name__}")


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return 2 * math.pi ** (n / 2) / gamma_fn(n / 2)


def _angular_integral(angular: AngularPart, q: float, n: int) -> float:
    # integral over the unit sphere of |omega|^q
    if angular.kind == "constant_one" or n == 1:
        return sphere_area(n)
    if angular.kind == "first_coordinate_ratio":
        return 2 * math.pi ** ((n - 1) / 2) * gamma_fn((q + 1) / 2) / gamma_fn((n + q) / 2)
    raise NotImplementedError("closed-form norms need a shipped angular part")


def _power_shell(a: float, lo: float, hi: float) -> float:
    """Integral of r^(a-1) over [lo, hi], possibly infinite."""
    if hi == math.inf:
        return math.inf if a >= 0 else -(lo**a) / a
    if lo == 0:
        return math.inf if a <= 0 else hi**a / a
    return math.log(hi / lo) if a == 0 else (hi**a - lo**a) / a


def radial_pieces(profile: Profile) -> list[tuple[float, float, float, float]]:
    """Radial factor as a sum of coef * r^-power on [lo, hi] (lam excluded)."""
    if isinstance(profile, SingularPower):
        return [(profile.gamma, 0.0, math.inf, 1.0)]
    if isinstance(profile, TruncatedSingular):
        return [(profile.gamma, 0.0, profile.epsilon, 1.0)]
    if isinstance(profile, TailPower):
        return [(profile.gamma, profile.radius, math.inf, 1.0)]
    if isinstance(profile, TwoPower):
        rho = profile.radius
        return [
            (profile.gamma1, 0.0, rho, 1.0),
            (profile.gamma2, rho, math.inf, rho ** (profile.gamma2 - profile.gamma1)),
        ]
    if isinstance(profile, Constant):
        return [(0.0, 0.0, math.inf, profile.c)]
    raise NotImplementedError(type(profile).__name__)


def lebesgue_norm(profile: Profile, q: float, weight: float = 0.0, dimension: int = 1) -> float:
    """Closed-form weighted norm || |x|^weight profile ||_q on R^N."""
    n, g, lam = dimension, weight, abs(profile.lam)
    if isinstance(profile, Constant):
        if q == math.inf and g == 0:
            return lam * abs(profile.c)
        return math.inf if profile.c != 0 else 0.0
    if isinstance(profile, (BoundedBump, DiracApprox)):
        if isinstance(profile, BoundedBump):
            amp, w = profile.amplitude, profile.width
        else:
            amp, w = profile.mass * (4 * math.pi * profile.width) ** (-n / 2), 2 * math.sqrt(profile.width)
        if q == math.inf:
            return lam * abs(amp) * ((g * w * w / 2) ** (g / 2) * math.exp(-g / 2) if g > 0 else 1.0)
        s = (n + g * q) / 2
        return lam * abs(amp) * (sphere_area(n) * 0.5 * (w * w / q) ** s * gamma_fn(s)) ** (1 / q)
    if isinstance(profile, SectorPsi0):
        raise NotImplementedError("sector data are measured by sector_ratio_norm")
    om = profile.omega
    pieces = radial_pieces(profile)
    if q == math.inf:
        best = 0.0
        for p, lo, hi, coef in pieces:
            e = g - p
            if (e < 0 and lo == 0) or (e > 0 and hi == math.inf):
                return math.inf
            ends = [v for v in (lo, hi) if 0 < v < math.inf]
            cand = [coef * v**e for v in ends] or [coef]
            best = max(best, max(cand))
        return lam * om.sup() * best
    total = 0.0
    for p, lo, hi, coef in pieces:
        total += coef**q * _power_shell(n + (g - p) * q, lo, hi)
    return lam * (_angular_integral(om, q, n) * total) ** (1 / q)


@dataclass(frozen=True)
class SectorRatio:
    value: float
    finite: bool
    coarse: float
    fine: float


def _sector_points(n: int, m: int, r_min: float, r_max: float, nr: int, na: int) -> np.ndarray:
    radii = np.geomspace(r_min, r_max, nr)
    if n == 1:
        return radii[:, None]
    rng = np.random.default_rng(12345)
    dirs = rng.normal(size=(na, n))
    dirs[:, :m] = np.abs(dirs[:, :m])
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, n)


def sector_ratio_norm(
    profile: Profile,
    m: int,
    gamma: float,
    dimension: int = 1,
    r_min: float = 1e-3,
    r_max: float = 1e3,
    rel_tol: float = 0.05,
) -> SectorRatio:
    """sup of |profile / psi0| over sampled points of the sector.

    The sup is taken on a log-polar sampling of {r_min <= |x| <= r_max}
    and on a denser one that also reaches ten times further in and out; a
    change larger than ``rel_tol`` between them (or a non-finite ratio) is
    reported as unbounded.
    """
    if not 1 <= m <= dimension:
        raise ValueError("need 1 <= m <= N")
    psi0 = SectorPsi0(m=m, gamma=gamma)
    sups = []
    for level in (0, 1):
        nr = 64 * 2**level + 1
        widen = 10.0**level
        pts = _sector_points(dimension, m, r_min / widen, r_max * widen, nr, 32 * 2**level)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(profile.values(pts) / psi0.values(pts))
        sups.append(float(np.max(ratio)) if np.all(np.isfinite(ratio)) else math.inf)
    coarse, fine = sups
    finite = math.isfinite(fine) and abs(fine - coarse) <= rel_tol * max(fine, 1e-300)
    return SectorRatio(value=fine if finite else math.inf, finite=finite, coarse=coarse, fine=fine)


# JSON construction

_KINDS = {
    "constant": (Constant, {"c"}),
    "bounded_bump": (BoundedBump, {"amplitude", "width"}),
    "dirac_approx": (DiracApprox, {"mass", "width"}),
    "singular_power": (SingularPower, {"gamma", "omega"}),
    "truncated_singular": (TruncatedSingular, {"gamma", "omega", "epsilon"}),
    "tail_power": (TailPower, {"gamma", "omega", "radius"}),
    "two_power": (TwoPower, {"gamma1", "gamma2", "omega", "radius"}),
    "sector_psi0": (SectorPsi0, {"m", "gamma", "epsilon"}),
    "measure": (MeasureDatum, {"mass"}),
}


def _angular_from_config(spec, path: str) -> AngularPart:
    if isinstance(spec, str):
        spec = {"kind": spec}
    if not isinstance(spec, dict):
        raise ConfigInvalid(path, "omega must be a string or object")
    extra = set(spec) - {"kind", "signed"}
    if extra:
        raise ConfigInvalid(f"{path}.{sorted(extra)[0]}", "unknown key")
    kind = spec.get("kind", "constant_one")
    if kind not in ("constant_one", "first_coordinate_ratio"):
        raise ConfigInvalid(f"{path}.kind", f"unknown angular kind {kind!r}")
    return AngularPart(kind=kind, signed=bool(spec.get("signed", False)))


def profile_from_config(cfg: dict, path: str = "datum") -> Profile:
    """Build a profile from a JSON object with a "kind" discriminator."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigInvalid(path, "datum needs a 'kind'")
    kind = cfg["kind"]
    if kind not in _KINDS:
        raise ConfigInvalid(f"{path}.kind", f"unknown datum kind {kind!r}")
    cls, allowed = _KINDS[kind]
    kwargs = {}
    for key, val in cfg.items():
        if key == "kind":
            continue
        if key == "lambda":
            kwargs["lam"] = float(val)
        elif key not in allowed:
            raise ConfigInvalid(f"{path}.{key}", "unknown key")
        elif key == "omega":
            kwargs["angular"] = _angular_from_config(val, f"{path}.omega")
        elif key == "m":
            kwargs["m"] = int(val)
        else:
            kwargs[key] = None if val is None else float(val)
    try:
        prof = cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(path, str(exc)) from exc
    check_admissible(prof, path)
    return prof


def check_admissible(profile: Profile, path: str = "datum") -> None:
    for name in ("gamma", "gamma1", "gamma2"):
        g = getattr(profile, name, None)
        if g is not None and not g > 0:
            raise ConfigInvalid(f"{path}.{name}", "must be positive")
    for name in ("width", "epsilon", "radius"):
        v = getattr(profile, name, None)
        if v is not None and not v > 0:
            raise ConfigInvalid(f"{path}.{name}", "must be positive")


def profile_to_config(profile: Profile) -> dict:
    for kind, (cls, allowed) in _KINDS.items():
        if type(profile) is cls:
            out = {"kind": kind}
            for key in sorted(allowed):
                if key == "omega":
                    om = profile.angular
                    out["omega"] = {"kind": om.kind, "signed": om.signed} if om.signed else om.kind
                else:
                    out[key] = getattr(profile, key)
            if hasattr(profile, "lam"):  # a point mass carries its size in ``mass``
                out["lambda"] = profile.lam
            return out
    raise TypeError(type(profile).__name__)


def require_integrable(profile: Profile, dimension: int) -> None:
    g = profile.singular_order
    if g >= dimension:
        raise NonIntegrableSingularity(
            f"|x|^-{g} is not locally integrable in dimension {dimension}"
        )
