"""Anisotropic phase-space geometry.

The scaling radius lambda solves lambda^(-2t)|x|^2 + lambda^(-2s)|xi|^2 = 1
for a phase-space point (x, xi).  Projection along the power curve
mu -> (mu^t x, mu^s xi) retracts any nonzero point onto the unit sphere,
and two families of anisotropically conic neighborhoods are built on top
of that projection.  The projection depends only on the ratio s/t, so the
neighborhood helpers take that ratio (sigma) directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class AnisoIndex:
    """Decay index t and regularity index s, with t > 0, s > 0, t + s > 1."""

    t: float
    s: float

    def __post_init__(self):
        if not (self.t > 0.0 and self.s > 0.0):
            raise DomainError(f"indices must be positive, got t={self.t}, s={self.s}")
        if not self.t + self.s > 1.0:
            raise DomainError(f"need t + s > 1, got t + s = {self.t + self.s}")

    @property
    def sigma(self) -> float:
        """Anisotropy ratio s/t governing the sphere projection."""
        return self.s / self.t

    def scaled(self, p: float) -> "AnisoIndex":
        return AnisoIndex(self.t * p, self.s * p)


class PhasePoint:
    """A point (x, xi) in phase space R^d x R^d; coordinates are 1-d arrays."""

    __slots__ = ("x", "xi")

    def __init__(self, x, xi):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if x.ndim != 1 or xi.ndim != 1 or x.shape != xi.shape:
            raise DomainError(f"x and xi must be 1-d of equal length, got {x.shape} vs {xi.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(xi))):
            raise DomainError("phase point has non-finite coordinates")
        self.x = x
        self.xi = xi

    @property
    def dim(self) -> int:
        return self.x.size

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.linalg.norm(self.as_vector()) <= tol)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi])

    @classmethod
    def from_vector(cls, z) -> "PhasePoint":
        z = np.asarray(z, dtype=float)
        if z.size % 2 != 0:
            raise DomainError("phase-space vector must have even length")
        d = z.size // 2
        return cls(z[:d], z[d:])

    def __repr__(self):
        return f"PhasePoint(x={self.x.tolist()}, xi={self.xi.tolist()})"


class SphereDirection:
    """Unit vector on S^(2d-1), stored as the concatenated (x, xi) block."""

    __slots__ = ("z",)

    def __init__(self, z):
        z = np.asarray(z, dtype=float)
        if z.ndim != 1 or z.size % 2 != 0:
            raise DomainError("direction must be a flat even-length vector")
        n = np.linalg.norm(z)
        if abs(n - 1.0) > 1e-12:
            raise DomainError(f"direction norm {n} deviates from 1 beyond 1e-12")
        self.z = z

    @property
    def dim(self) -> int:
        return self.z.size // 2

    @property
    def x(self) -> np.ndarray:
        return self.z[: self.dim]

    @property
    def xi(self) -> np.ndarray:
        return self.z[self.dim:]

    def as_point(self) -> PhasePoint:
        return PhasePoint(self.x, self.xi)

    def __repr__(self):
        return f"SphereDirection({self.z.tolist()})"


def _lambda_solve_arrays(t: float, s: float, x_sq: np.ndarray, xi_sq: np.ndarray) -> np.ndarray:
    """Vectorized root of lambda^(-2t) a + lambda^(-2s) b = 1 for a = |x|^2, b = |xi|^2.

    Solved in u = log(lambda): h(u) = logaddexp(La - 2t u, Lb - 2s u) is strictly
    decreasing, bracketed by closed-form axis roots, bisected and Newton-polished.
    """
    a = np.asarray(x_sq, dtype=float)
    b = np.asarray(xi_sq, dtype=float)
    if np.any((a == 0.0) & (b == 0.0)):
        raise DomainError("lambda is undefined at the zero point")

    with np.errstate(divide="ignore"):
        la = np.log(a)   # -inf where a == 0
        lb = np.log(b)

    # u0: log of max(|x|^(1/t), |xi|^(1/s)); dominant term contributes exactly 1 there.
    u0 = np.maximum(la / (2.0 * t), lb / (2.0 * s))
    lo = u0.copy()
    hi = u0 + max(_LOG2 / (2.0 * t), _LOG2 / (2.0 * s))

    def h(u):
        return np.logaddexp(la - 2.0 * t * u, lb - 2.0 * s * u)

    for _ in range(64):
        mid = 0.5 * (lo + hi)
        take_hi = h(mid) > 0.0
        lo = np.where(take_hi, mid, lo)
        hi = np.where(take_hi, hi, mid)
    u = 0.5 * (lo + hi)

    for _ in range(2):
        ea = np.exp(la - 2.0 * t * u)
        eb = np.exp(lb - 2.0 * s * u)
        g = ea + eb - 1.0
        dg = -(2.0 * t * ea + 2.0 * s * eb)
        u = u - g / dg

    return np.exp(u)


def lambda_solve(idx: AnisoIndex, p: PhasePoint) -> float:
    """Unique positive root of lambda^(-2t)|x|^2 + lambda^(-2s)|xi|^2 = 1."""
    if p.is_zero():
        raise DomainError("lambda is undefined at the zero point")
    a = float(np.dot(p.x, p.x))
    b = float(np.dot(p.xi, p.xi))
    return float(_lambda_solve_arrays(idx.t, idx.s, np.array([a]), np.array([b]))[0])


def lambda_solve_many(idx: AnisoIndex, xs: np.ndarray, xis: np.ndarray) -> np.ndarray:
    """Vectorized scaling roots for points given as (N, d) coordinate arrays."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    return _lambda_solve_arrays(idx.t, idx.s,
                                np.sum(xs * xs, axis=1), np.sum(xis * xis, axis=1))


def lambda_residual(idx: AnisoIndex, p: PhasePoint, lam: float) -> float:
    """Defect of the defining equation at lam (target 0, scale 1)."""
    a = float(np.dot(p.x, p.x))
    b = float(np.dot(p.xi, p.xi))
    return abs(lam ** (-2.0 * idx.t) * a + lam ** (-2.0 * idx.s) * b - 1.0)


def project(idx: AnisoIndex, p: PhasePoint) -> SphereDirection:
    """Retract p onto S^(2d-1) along its anisotropic curve."""
    lam = lambda_solve(idx, p)
    return SphereDirection(
        np.concatenate([p.x / lam ** idx.t, p.xi / lam ** idx.s])
    )


def project_many(idx: AnisoIndex, xs: np.ndarray, xis: np.ndarray) -> np.ndarray:
    """Vectorized projection; xs, xis of shape (N, d) -> directions (N, 2d)."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    lam = _lambda_solve_arrays(idx.t, idx.s, np.sum(xs * xs, axis=1), np.sum(xis * xis, axis=1))
    return np.concatenate(
        [xs / lam[:, None] ** idx.t, xis / lam[:, None] ** idx.s], axis=1
    )


def scale_point(idx: AnisoIndex, p: PhasePoint, mu: float) -> PhasePoint:
    """Move p along its curve: (mu^t x, mu^s xi)."""
    if not mu > 0.0:
        raise DomainError(f"scale factor must be positive, got {mu}")
    return PhasePoint(p.x * mu ** idx.t, p.xi * mu ** idx.s)


def in_gamma_nbhd(sigma: float, z0: SphereDirection, eps: float, p: PhasePoint) -> bool:
    """Membership in the projection-based conic neighborhood of z0.

    True iff |z0 - p_{1,sigma}(p)| < eps.  For eps > 2 this is all of
    phase space minus the origin.
    """
    if not (sigma > 0.0 and eps > 0.0):
        raise DomainError("sigma and eps must be positive")
    if p.is_zero():
        raise DomainError("neighborhood membership undefined at the zero point")
    proj = project(AnisoIndex(1.0, sigma), p)
    return bool(np.linalg.norm(z0.z - proj.z) < eps)


def gamma_tilde_distance(sigma: float, z0: SphereDirection, p: PhasePoint,
                         log_lambda_bounds=(-4.0 * math.log(10.0), 4.0 * math.log(10.0)),
                         max_iter: int = 200) -> float:
    """min over lambda in [1e-4, 1e4] of |(lambda y, lambda^sigma eta) - z0|.

    Coarse scan to bracket, then golden-section on log(lambda).  The distance
    is unimodal near its minimizer for the small eps this backs.
    """
    if p.is_zero():
        raise DomainError("distance undefined at the zero point")
    y, eta = p.x, p.xi
    zx, zxi = z0.x, z0.xi

    def dist(u):
        lam = math.exp(u)
        dv = np.concatenate([lam * y - zx, lam ** sigma * eta - zxi])
        return float(np.linalg.norm(dv))

    u_lo, u_hi = log_lambda_bounds
    grid = np.linspace(u_lo, u_hi, 65)
    vals = [dist(u) for u in grid]
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = dist(c), dist(d)
    for _ in range(max_iter):
        if hi - lo < 1e-13:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = dist(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = dist(d)
    return min(vals[k], fc, fd)


def in_gamma_tilde_nbhd(sigma: float, z0: SphereDirection, eps: float, p: PhasePoint) -> bool:
    """True iff some rescaling (lambda y, lambda^sigma eta) lands in the eps-ball at z0."""
    if not (sigma > 0.0 and eps > 0.0):
        raise DomainError("sigma and eps must be positive")
    return gamma_tilde_distance(sigma, z0, p) < eps


def dist_to_conic_set(sigma: float, directions, p: PhasePoint) -> float:
    """inf over w in the direction set of |p_{1,sigma}(p) - w|."""
    dirs = list(directions)
    if not dirs:
        raise DomainError("direction set must be nonempty")
    if p.is_zero():
        raise DomainError("distance undefined at the zero point")
    proj = project(AnisoIndex(1.0, sigma), p)
    w = np.stack([d.z for d in dirs])
    return float(np.min(np.linalg.norm(w - proj.z[None, :], axis=1)))


def growth_bounds(idx: AnisoIndex, points) -> tuple[float, float]:
    """Sampled constants (c1, c2) with c1 rho <= lambda <= c2 rho, rho = |x|^(1/t)+|xi|^(1/s)."""
    ratios = []
    for p in points:
        rho = np.linalg.norm(p.x) ** (1.0 / idx.t) + np.linalg.norm(p.xi) ** (1.0 / idx.s)
        ratios.append(lambda_solve(idx, p) / rho)
    return float(min(ratios)), float(max(ratios))


def angle_between(u: np.ndarray, v: np.ndarray) -> float:
    """Angle in radians between two unit vectors."""
    return float(math.acos(min(1.0, max(-1.0, float(np.dot(u, v))))))
