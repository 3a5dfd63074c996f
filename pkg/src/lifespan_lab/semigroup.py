"""Heat semigroup on the truncated box, closed-form shortcuts and sup constants."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize
from scipy.ndimage import convolve1d
from scipy.special import erf, gamma as gamma_fn, gammainc, ive

from .errors import KernelUnderresolved, NonIntegrableSingularity, SymmetryViolation
from .field_core import Field, Grid, NormSpec, antisymmetrize, norm, sample_profile
from .profiles import (
    AngularPart,
    BoundedBump,
    Constant,
    DiracApprox,
    MeasureDatum,
    SectorPsi0,
    TailPower,
    radial_pieces,
    sector_constant,
    sphere_area,
)

# kernel support in standard deviations
_TRUNCATION = 10.0


@lru_cache(maxsize=256)
def heat_weights(h: float, t: float) -> np.ndarray:
    """1D convolution weights for e^{tΔ} on a lattice of spacing h.

    Each weight is the exact integral of a Gaussian over one cell.  The
    Gaussian time is reduced by h^2/24, the variance the cell integration
    itself adds, so that composed steps agree with a single step to
    fourth order in h.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if math.sqrt(t) < h / 2:
        raise KernelUnderresolved(f"sqrt(t)={math.sqrt(t):.3g} below half a cell ({h / 2:.3g})")
    tau = t - h * h / 24
    s = 2 * math.sqrt(tau)
    k = int(math.ceil(_TRUNCATION * math.sqrt(2 * tau) / h)) + 1
    off = np.arange(-k, k + 1) * h
    w = 0.5 * (erf((off + h / 2) / s) - erf((off - h / 2) / s))
    w = np.clip(w, 0.0, None)
    total = math.fsum(w)
    if total > 1:
        w = w / (total * (1 + 4e-16))
    w.flags.writeable = False
    return w


def heat_step(fld: Field, t: float) -> Field:
    """e^{tΔ} by separable zero-padded convolution with cell-integrated weights."""
    grid = fld.grid
    w = heat_weights(grid.spacing, float(t))
    v = fld.values
    lo, hi = min(float(v.min()), 0.0), max(float(v.max()), 0.0)
    out = np.array(v, dtype=float)
    for axis in range(grid.dimension):
        out = convolve1d(out, w, axis=axis, mode="constant", cval=0.0)
    # convex weights: clipping only removes last-ulp rounding
    np.clip(out, lo, hi, out=out)
    if fld.antisymmetry_axes:
        out = antisymmetrize(out, fld.antisymmetry_axes)
    return fld.with_values(out)


def check_antisymmetric(values: np.ndarray, m: int, tol: float = 1e-12) -> None:
    scale = max(1.0, float(np.max(np.abs(values))))
    for axis in range(m):
        dev = float(np.max(np.abs(values + np.flip(values, axis=axis))))
        if dev > tol * scale:
            raise SymmetryViolation(f"field is not odd in axis {axis} (deviation {dev:.3g})")


def sector_heat_step(fld: Field, t: float, m: int) -> Field:
    """Dirichlet heat flow on the sector {x_1..x_m > 0} by odd reflection."""
    check_antisymmetric(fld.values, m)
    odd = Field(fld.grid, fld.values, m)
    return heat_step(odd, t)


def leakage(before: Field, after: Field) -> float:
    """Mass lost through the box boundary."""
    return abs(after.mass() - before.mass())


def heat_of_profile(profile, t: float, grid: Grid) -> Field:
    """e^{tΔ}profile on ``grid``, in closed form when one exists."""
    if isinstance(profile, MeasureDatum):
        return sample_profile(DiracApprox(mass=profile.mass, width=t), grid)
    if isinstance(profile, Constant):
        return sample_profile(profile, grid)
    if isinstance(profile, BoundedBump):
        n, w2 = grid.dimension, profile.width**2
        amp = profile.amplitude * (w2 / (w2 + 4 * t)) ** (n / 2)
        return sample_profile(BoundedBump(amplitude=amp, width=math.sqrt(w2 + 4 * t), lam=profile.lam), grid)
    if isinstance(profile, DiracApprox):
        return sample_profile(DiracApprox(mass=profile.mass, width=profile.width + t, lam=profile.lam), grid)
    fld = sample_profile(profile, grid)
    if profile.antisymmetry_axes:
        return sector_heat_step(fld, t, profile.antisymmetry_axes)
    return heat_step(fld, t)


# radial quadrature

def _angular_mean(n: int, z):
    """Mean of e^{z cos} over the sphere, times e^{-z}."""
    z = np.asarray(z, dtype=float)
    if n == 1:
        return 0.5 * (1 + np.exp(-2 * z))
    nu = n / 2 - 1
    small = z < 1e-8
    zs = np.where(small, 1.0, z)
    val = gamma_fn(n / 2) * (zs / 2) ** (-nu) * ive(nu, zs)
    return np.where(small, np.exp(-z) * (1 + z * z / (4 * (nu + 1))), val)


def _power_at_origin(n: int, p: float, lo: float, hi: float, t: float) -> float:
    """Integral of r^(n-1-p) e^{-r^2/4t} over [lo, hi]."""
    s = (n - p) / 2
    if s > 0:
        a = 0.0 if lo == 0 else gammainc(s, lo * lo / (4 * t))
        b = 1.0 if hi == math.inf else gammainc(s, hi * hi / (4 * t))
        return 0.5 * (4 * t) ** s * gamma_fn(s) * (b - a)
    if lo == 0:
        raise NonIntegrableSingularity(f"r^-{p} is not integrable near 0 in dimension {n}")
    val, _ = integrate.quad(lambda r: r ** (n - 1 - p) * math.exp(-r * r / (4 * t)), lo, hi, limit=200)
    return val


def radial_heat_value(pieces, n: int, t: float, rho: float) -> float:
    """e^{tΔ}f at |x| = rho for radial f = sum of coef r^-p on [lo, hi]."""
    pref = (4 * math.pi * t) ** (-n / 2) * sphere_area(n)
    total = 0.0
    for p, lo, hi, coef in pieces:
        if coef == 0:
            continue
        if rho == 0:
            total += coef * _power_at_origin(n, p, lo, hi, t)
            continue

        def kern(r):
            return math.exp(-((rho - r) ** 2) / (4 * t)) * float(_angular_mean(n, rho * r / (2 * t)))

        w = 12 * math.sqrt(t)
        top = min(hi, rho + w + 40 * math.sqrt(t))
        if top <= lo:
            continue
        pts = [x for x in (rho - w, rho, rho + w) if lo < x < top]
        e = n - 1 - p
        if lo == 0:
            a = min(top, max(rho / 2, 1e-3 * math.sqrt(t)))
            head, _ = integrate.quad(kern, 0, a, weight="alg", wvar=(e, 0), limit=200)
            rest = 0.0
            if a < top:
                rest, _ = integrate.quad(lambda r: r**e * kern(r), a, top, points=[x for x in pts if a < x < top] or None, limit=200)
            total += coef * (head + rest)
        else:
            val, _ = integrate.quad(lambda r: r**e * kern(r), lo, top, points=pts or None, limit=200)
            total += coef * val
    return pref * total


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def radial_heat_values(pieces, n: int, t: float, rhos) -> np.ndarray:
    """Vectorized radial_heat_value for pieces that stay away from the origin."""
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    if any(lo == 0 and c != 0 for _, lo, _, c in pieces):
        return np.array([radial_heat_value(pieces, n, t, float(r)) for r in rhos])
    pref = (4 * math.pi * t) ** (-n / 2) * sphere_area(n)
    sd = math.sqrt(t)
    panels = 12
    out = np.zeros_like(rhos)
    for p, lo, hi, coef in pieces:
        a = np.maximum(lo, rhos - 14 * sd)
        b = np.minimum(hi, rhos + 14 * sd)
        ok = b > a
        if not np.any(ok):
            continue
        edges = a[:, None] + (b - a)[:, None] * np.linspace(0, 1, panels + 1)[None, :]
        mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
        half = 0.5 * (edges[:, 1:] - edges[:, :-1])
        r = mid[:, :, None] + half[:, :, None] * _GL_X[None, None, :]
        w = half[:, :, None] * _GL_W[None, None, :]
        rho = rhos[:, None, None]
        kern = np.exp(-((rho - r) ** 2) / (4 * t)) * _angular_mean(n, rho * r / (2 * t))
        vals = np.sum(w * r ** (n - 1 - p) * kern, axis=(1, 2))
        out += np.where(ok, coef * vals, 0.0)
    return pref * out


def _maximize(func, scale: float, upper: float, vfunc=None) -> tuple[float, float]:
    """Grid scan then bounded refinement of a one-dimensional maximum."""
    xs = np.concatenate([[0.0], np.geomspace(1e-3 * scale, upper, 80)])
    vals = vfunc(xs) if vfunc is not None else np.array([func(x) for x in xs])
    i = int(np.argmax(vals))
    best_x, best = float(xs[i]), float(vals[i])
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda x: -func(x), bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-10 * max(hi, 1e-12)})
        if -res.fun > best:
            best_x, best = float(res.x), float(-res.fun)
    return best_x, best


def _sector_line_value(profile: SectorPsi0, t: float, x: float) -> float:
    """e^{tΔ_1} of the 1D sector datum at x > 0 (lam excluded)."""
    c = sector_constant(1, profile.gamma)
    g = profile.gamma
    pref = (4 * math.pi * t) ** -0.5

    def kern(y):
        if y == 0:
            return math.exp(-x * x / (4 * t)) * x / t
        return math.exp(-((x - y) ** 2) / (4 * t)) * -math.expm1(-x * y / t) / y

    top = x + 40 * math.sqrt(t)
    if profile.epsilon is not None:
        top = min(top, profile.epsilon)
    a = min(top, max(x / 2, math.sqrt(t) * 1e-2))
    head, _ = integrate.quad(kern, 0, a, weight="alg", wvar=(-g, 0), limit=200)
    rest = 0.0
    if top > a:
        rest, _ = integrate.quad(lambda y: y**-g * kern(y), a, top, points=[x] if a < x < top else None, limit=200)
    return pref * c * (head + rest)


def _sector_line_values(profile: SectorPsi0, t: float, xs) -> np.ndarray:
    """Vectorized _sector_line_value over points x > 0."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    g, sd = profile.gamma, math.sqrt(t)
    c = sector_constant(1, g)
    eps = math.inf if profile.epsilon is None else profile.epsilon
    lo = np.maximum(0.0, xs - 14 * sd)
    hi = np.minimum(eps, xs + 14 * sd)
    k = 1 / (1 - g) if g < 1 else None
    panels = 12
    out = np.zeros_like(xs)
    u = np.linspace(0, 1, panels + 1)
    for j, (x, a, b) in enumerate(zip(xs, lo, hi)):
        if b <= a or x <= 0:
            continue
        if a == 0 and k is not None:
            # y = s^k turns y^-gamma dy into k ds
            edges = b ** (1 / k) * u
        elif a == 0:
            out[j] = _sector_line_value(profile, t, float(x)) / (abs(profile.lam) or 1.0) * (4 * math.pi * t) ** 0.5 / c
            continue
        else:
            edges = a + (b - a) * u
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        sn = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        w = (half[:, None] * _GL_W[None, :]).ravel()
        if a == 0:
            y = sn**k
            jac = k * np.ones_like(y)
        else:
            y = sn
            jac = y**-g
        with np.errstate(divide="ignore", invalid="ignore"):
            ker = np.exp(-((x - y) ** 2) / (4 * t)) * np.where(y > 0, -np.expm1(-x * y / t) / np.where(y > 0, y, 1.0), x / t)
        out[j] = np.sum(w * jac * ker)
    return (4 * math.pi * t) ** -0.5 * c * out


def heat_sup(profile, t: float, dimension: int, grid: Grid | None = None) -> float:
    """sup |e^{tΔ}profile|, analytic or by 1D quadrature where possible."""
    n = dimension
    if isinstance(profile, MeasureDatum):
        return abs(profile.mass) * (4 * math.pi * t) ** (-n / 2)
    if isinstance(profile, Constant):
        return abs(profile.lam * profile.c)
    if isinstance(profile, BoundedBump):
        w2 = profile.width**2
        return abs(profile.lam * profile.amplitude) * (w2 / (w2 + 4 * t)) ** (n / 2)
    if isinstance(profile, DiracApprox):
        return abs(profile.lam * profile.mass) * (4 * math.pi * (t + profile.width)) ** (-n / 2)
    if isinstance(profile, SectorPsi0) and n == 1:
        scale = math.sqrt(t)
        upper = 20 * scale + (profile.epsilon or 0.0)
        _, best = _maximize(lambda x: float(_sector_line_values(profile, t, x)[0]), scale, upper,
                            vfunc=lambda xs: _sector_line_values(profile, t, xs))
        return abs(profile.lam) * best
    if profile.antisymmetry_axes == 0 and profile.omega.is_radial:
        try:
            pieces = radial_pieces(profile)
        except NotImplementedError:
            pieces = None
        if pieces is not None and all(c >= 0 for *_, c in pieces):
            if not isinstance(profile, TailPower):
                # radially nonincreasing data keep their maximum at the origin
                return abs(profile.lam) * radial_heat_value(pieces, n, t, 0.0)
            scale = math.sqrt(t)
            upper = profile.radius + 30 * scale
            _, best = _maximize(lambda r: float(radial_heat_values(pieces, n, t, r)[0]), scale, upper,
                                vfunc=lambda rs: radial_heat_values(pieces, n, t, rs))
            return abs(profile.lam) * best
    if grid is None:
        raise ValueError("this profile needs a grid for its heat flow")
    return norm(heat_of_profile(profile, t, grid), NormSpec())


def weighted_heat_sup(gamma: float, weight: float, dimension: int) -> float:
    """sup_x |x|^weight e^{Δ}(|.|^-gamma)(x) for radial data."""
    if gamma >= dimension:
        raise NonIntegrableSingularity("gamma must be below the dimension")
    pieces = [(gamma, 0.0, math.inf, 1.0)]

    def f(r):
        return (r**weight if weight else 1.0) * radial_heat_value(pieces, dimension, 1.0, r)

    _, best = _maximize(f, 1.0, 60.0)
    if weight == gamma:
        best = max(best, 1.0)  # value at infinity
    return best


# angular quadrature for non-radial omega

def _sphere_rule(n: int):
    if n == 2:
        th = 2 * math.pi * (np.arange(256) + 0.5) / 256
        return np.stack([np.cos(th), np.sin(th)], axis=-1), np.full(256, 2 * math.pi / 256)
    z, wz = np.polynomial.legendre.leggauss(48)
    ph = 2 * math.pi * (np.arange(96) + 0.5) / 96
    Z, P = np.meshgrid(z, ph, indexing="ij")
    s = np.sqrt(1 - Z * Z)
    dirs = np.stack([s * np.cos(P), s * np.sin(P), Z], axis=-1).reshape(-1, 3)
    w = (wz[:, None] * np.full(96, 2 * math.pi / 96)[None, :]).ravel()
    return dirs, w


def _nonradial_value(gamma: float, omega: AngularPart, n: int, x: np.ndarray) -> float:
    dirs, wa = _sphere_rule(n)
    om = omega.value(dirs)
    rx = float(np.linalg.norm(x))
    rmax = rx + 14.0
    # r = rmax s^k removes the r^(n-1-gamma) endpoint singularity
    k = 2.0 / (n - gamma)
    s, ws = np.polynomial.legendre.leggauss(160)
    s, ws = (s + 1) / 2, ws / 2
    r = rmax * s**k
    jac = rmax * k * s ** (k - 1)
    pts = r[:, None, None] * dirs[None, :, :]
    d2 = np.sum((pts - x) ** 2, axis=-1)
    g = (4 * math.pi) ** (-n / 2) * np.exp(-d2 / 4)
    inner = g @ (wa * om)
    return float(np.sum(ws * jac * r ** (n - 1 - gamma) * inner))


def scaled_sup_constant(gamma: float, omega: AngularPart | None = None, dimension: int = 1,
                        r: float = math.inf) -> float:
    """|| e^{Δ}(omega |.|^-gamma) ||_r, with r = inf the sup norm."""
    n = dimension
    omega = omega or AngularPart()
    if not 0 < gamma < n:
        raise NonIntegrableSingularity("need 0 < gamma < N")
    pieces = [(gamma, 0.0, math.inf, 1.0)]
    if omega.is_radial or n == 1:
        if r == math.inf:
            _, best = _maximize(lambda x: radial_heat_value(pieces, n, 1.0, x), 1.0, 40.0)
            return best
        if gamma * r <= n:
            raise NonIntegrableSingularity("the L^r norm diverges at infinity")
        cut = 60.0
        body, _ = integrate.quad(
            lambda x: x ** (n - 1) * radial_heat_value(pieces, n, 1.0, x) ** r, 0, cut, limit=200
        )
        tail = cut ** (n - gamma * r) / (gamma * r - n)
        return (sphere_area(n) * (body + tail)) ** (1 / r)
    if r != math.inf:
        raise NotImplementedError("finite r is shipped for radial omega only")
    # non-radial: scan a ball of radius 8, then polish the best point
    dirs, _ = _sphere_rule(n)
    sel = dirs[:: max(1, len(dirs) // 24)]
    best_x, best = None, -math.inf
    for rad in np.linspace(0.25, 8.0, 32):
        for d in sel:
            v = _nonradial_value(gamma, omega, n, rad * d)
            if v > best:
                best, best_x = v, rad * d
    res = optimize.minimize(lambda y: -_nonradial_value(gamma, omega, n, y), best_x,
                            method="Nelder-Mead", options={"xatol": 1e-6, "fatol": 1e-10})
    if np.linalg.norm(res.x) <= 8.0:
        best = max(best, -float(res.fun))
    return best
