"""Cell-centered grids, sampled fields and (weighted) Lebesgue norms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erf

from .errors import InvalidGrid, NonFiniteField, NonIntegrableSingularity, OddPointCount
from .profiles import BoundedBump, DiracApprox, Profile


@dataclass(frozen=True)
class Grid:
    """Box [-R, R]^N split into n cells per axis; nodes are cell centers."""

    dimension: int
    half_width: float
    points_per_axis: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dimension

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dimension

    def axis(self) -> np.ndarray:
        return _axis(self)

    def points(self) -> np.ndarray:
        """Node coordinates, shape (n, ..., n, N)."""
        return _points(self)

    def radius(self) -> np.ndarray:
        return _radius(self)


@lru_cache(maxsize=64)
def _axis(grid: Grid) -> np.ndarray:
    n, h = grid.points_per_axis, grid.spacing
    a = -grid.half_width + (np.arange(n) + 0.5) * h
    a.flags.writeable = False
    return a


@lru_cache(maxsize=32)
def _points(grid: Grid) -> np.ndarray:
    ax = grid.axis()
    mesh = np.meshgrid(*([ax] * grid.dimension), indexing="ij")
    p = np.stack(mesh, axis=-1)
    p.flags.writeable = False
    return p


@lru_cache(maxsize=32)
def _radius(grid: Grid) -> np.ndarray:
    r = np.sqrt(np.sum(grid.points() ** 2, axis=-1))
    r.flags.writeable = False
    return r


def make_grid(dimension: int, half_width: float, points_per_axis: int) -> Grid:
    if dimension not in (1, 2, 3):
        raise InvalidGrid(f"dimension must be 1, 2 or 3, got {dimension}")
    if not half_width > 0:
        raise InvalidGrid("half_width must be positive")
    if points_per_axis % 2:
        raise OddPointCount(f"points_per_axis must be even, got {points_per_axis}")
    if points_per_axis < 16:
        raise InvalidGrid("points_per_axis must be at least 16")
    return Grid(int(dimension), float(half_width), int(points_per_axis))


@dataclass(frozen=True, eq=False)
class Field:
    """Cell values of a function on ``grid``; ``values`` has shape grid.shape."""

    grid: Grid
    values: np.ndarray
    antisymmetry_axes: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            v = v.reshape(self.grid.shape)
        if not np.all(np.isfinite(v)):
            raise NonFiniteField("field values must be finite")
        if v is self.values:
            v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values, self.antisymmetry_axes)

    def mass(self) -> float:
        return float(np.sum(self.values) * self.grid.cell_volume)


@dataclass(frozen=True)
class NormSpec:
    q: float = math.inf
    gamma: float = 0.0

    def __post_init__(self):
        if not self.q >= 1:
            raise ValueError("q must be at least 1")
        if not self.gamma >= 0:
            raise ValueError("gamma must be nonnegative")


# quadrature helpers

def _gauss_box(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre nodes and weights on [0,1]^n."""
    x, w = np.polynomial.legendre.leggauss(p)
    x, w = (x + 1) / 2, w / 2
    mesh = np.meshgrid(*([x] * n), indexing="ij")
    wmesh = np.meshgrid(*([w] * n), indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=-1)
    weights = np.prod(np.stack([m.ravel() for m in wmesh], axis=-1), axis=-1)
    return nodes, weights


def _uniform_box(k: int, n: int) -> np.ndarray:
    """Midpoints of a k^n subdivision of [-1/2, 1/2]^n."""
    x = (np.arange(k) + 0.5) / k - 0.5
    mesh = np.meshgrid(*([x] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


_SUBCELLS = {1: 64, 2: 24, 3: 10}


def corner_cell_integral(func, h: float, signs: np.ndarray, singular_order: float,
                         depth: int = 14, order: int = 8) -> float:
    """Integral of ``func`` over the cell with a corner at 0 and edges h*signs.

    The cell is split into dyadic L-shaped shells towards the corner, each
    integrated with tensor Gauss-Legendre rules.  The unresolved core is
    added as the geometric tail of a degree ``-singular_order`` homogeneous
    integrand.
    """
    n = len(signs)
    nodes, weights = _gauss_box(order, n)
    offsets = [np.array(o) for o in np.ndindex(*([2] * n)) if any(o)]
    total, last = 0.0, 0.0
    for k in range(depth):
        a = h * 2.0 ** (-k - 1)
        shell = 0.0
        for off in offsets:
            pts = (off + nodes) * a * signs
            shell += float(np.sum(weights * func(pts))) * a**n
        total += shell
        last = shell
    rho = 2.0 ** (-(n - singular_order))
    return total + last * rho / (1 - rho)


def _straddles(r_lo: np.ndarray, r_hi: np.ndarray, radii) -> np.ndarray:
    mask = np.zeros(r_lo.shape, dtype=bool)
    for rad in radii:
        mask |= (r_lo < rad) & (r_hi > rad)
    return mask


def _gaussian_cell_average(profile: Profile, grid: Grid) -> np.ndarray:
    ax, h, n = grid.axis(), grid.spacing, grid.dimension
    if isinstance(profile, BoundedBump):
        s = profile.width
        amp = profile.amplitude * (s * math.sqrt(math.pi) / (2 * h)) ** n
    else:
        s = 2 * math.sqrt(profile.width)
        amp = profile.mass * (1 / (2 * h)) ** n
    line = erf((ax + h / 2) / s) - erf((ax - h / 2) / s)
    out = np.ones(grid.shape)
    for d in range(n):
        shape = [1] * n
        shape[d] = -1
        out = out * line.reshape(shape)
    return profile.lam * amp * out


def _sector_weight(pts: np.ndarray, m: int) -> np.ndarray:
    return np.abs(np.prod(pts[..., :m], axis=-1))


def antisymmetrize(values: np.ndarray, m: int) -> np.ndarray:
    """Exact odd projection in the first m axes."""
    v = np.asarray(values, dtype=float)
    for axis in range(m):
        v = 0.5 * (v - np.flip(v, axis=axis))
    return v


def sample_profile(profile: Profile, grid: Grid) -> Field:
    """Cell values of ``profile``.

    Point values are used except on cells touching a singularity at the
    origin or a jump radius, and for Gaussians narrower than two cells,
    where cell averages are stored instead.  Sector data are averaged
    against the weight |x1...xm|, which keeps their odd singular part
    integrable.
    """
    n, h = grid.dimension, grid.spacing
    m = profile.antisymmetry_axes
    s = profile.singular_order
    if s >= n:
        raise NonIntegrableSingularity(
            f"singularity of order {s} is not integrable in dimension {n}"
        )
    if m > n:
        raise ValueError("sector index exceeds the dimension")

    gaussian = isinstance(profile, (BoundedBump, DiracApprox))
    if gaussian:
        std = profile.width / math.sqrt(2) if isinstance(profile, BoundedBump) else math.sqrt(2 * profile.width)
    if gaussian and std < 2 * h:
        vals = _gaussian_cell_average(profile, grid)
        return Field(grid, vals, m)

    pts = grid.points()
    vals = np.array(profile.values(pts), dtype=float)

    radii = profile.discontinuity_radii()
    if radii:
        r = grid.radius()
        half_diag = h * math.sqrt(n) / 2
        mask = _straddles(r - half_diag, r + half_diag, radii)
        if np.any(mask):
            sub = _uniform_box(_SUBCELLS[n], n) * h
            centers = pts[mask]
            for i, c in zip(np.argwhere(mask), centers):
                sp = c + sub
                if m:
                    w = _sector_weight(sp, m)
                    vals[tuple(i)] = np.sum(profile.values(sp) * w) / np.sum(w)
                else:
                    vals[tuple(i)] = np.mean(profile.values(sp))

    if s > 0:
        mid = grid.points_per_axis // 2
        if m:
            def integrand(p):
                return profile.values(p) * _sector_weight(p, m)
            denom = (h * h / 2) ** m * h ** (n - m)
        else:
            integrand = profile.values
            denom = h**n
        for corner in np.ndindex(*([2] * n)):
            idx = tuple(mid - 1 + c for c in corner)
            signs = np.array([1.0 if c else -1.0 for c in corner])
            vals[idx] = corner_cell_integral(integrand, h, signs, s) / denom

    if m:
        vals = antisymmetrize(vals, m)
    return Field(grid, vals, m)


@lru_cache(maxsize=64)
def norm_weights(grid: Grid, gamma: float) -> np.ndarray:
    """|x|^gamma at nodes, replaced by cell averages within 2h of the origin."""
    r = grid.radius()
    if gamma == 0:
        w = np.ones(grid.shape)
    else:
        w = r**gamma
        near = r <= 2 * grid.spacing
        sub = _uniform_box(_SUBCELLS[grid.dimension], grid.dimension) * grid.spacing
        pts = grid.points()
        for i in np.argwhere(near):
            sp = pts[tuple(i)] + sub
            w[tuple(i)] = np.mean(np.sqrt(np.sum(sp * sp, axis=-1)) ** gamma)
    w.flags.writeable = False
    return w


def norm(fld: Field, spec: NormSpec = NormSpec()) -> float:
    """Discrete || |x|^gamma u ||_q."""
    a = np.abs(fld.values)
    if spec.gamma:
        a = a * norm_weights(fld.grid, float(spec.gamma))
    if spec.q == math.inf:
        return float(np.max(a))
    q = float(spec.q)
    top = float(np.max(a))
    if top == 0:
        return 0.0
    # scale first to avoid overflow for large q
    return top * float(np.sum((a / top) ** q) * fld.grid.cell_volume) ** (1 / q)
