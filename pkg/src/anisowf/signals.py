"""Test-signal construction and the symmetrically normalized Fourier transform.

Sampled signals live on a uniform centered grid x_j = (j - n/2) dx per axis;
the matching frequency grid is xi_k = (k - n/2) dxi with dxi = 2 pi / (n dx).
Distribution-like signals (Dirac delta, the constant function) are kept
analytic and never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, DomainError, ResolutionError
from .poly import PolynomialData, eval_grad, eval_poly

_TWO_PI = 2.0 * math.pi


class SampledSignal:
    """Complex samples of a function of d real variables on a centered grid."""

    __slots__ = ("dx", "values")

    def __init__(self, dx: float, values):
        values = np.asarray(values, dtype=complex)
        if values.ndim < 1:
            raise DomainError("values must have at least one axis")
        n = values.shape[0]
        if any(s != n for s in values.shape):
            raise DomainError(f"all axes must have equal length, got {values.shape}")
        if n < 16 or n & (n - 1) != 0:
            raise DomainError(f"samples per axis must be a power of two >= 16, got {n}")
        if not dx > 0.0:
            raise DomainError(f"grid spacing must be positive, got {dx}")
        if not np.all(np.isfinite(values)):
            raise DomainError("signal values must be finite")
        self.dx = float(dx)
        self.values = values

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def extent(self) -> float:
        """Half-width of the grid."""
        return self.n * self.dx / 2.0

    @property
    def dxi(self) -> float:
        return _TWO_PI / (self.n * self.dx)

    def axis_coords(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    def freq_coords(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dxi

    def grid(self) -> np.ndarray:
        """Coordinates of every grid node, shape values.shape + (dim,)."""
        axes = [self.axis_coords()] * self.dim
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def norm(self) -> float:
        """Discrete L2 norm with the dx^d quadrature weight."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dx ** self.dim))


@dataclass(frozen=True)
class AnalyticSignal:
    """Closed-form signal: dirac-delta, constant-one, gaussian, poly-chirp, or tensor."""

    kind: str
    dim: int
    width: float | None = None
    phase: PolynomialData | None = None
    factors: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("dirac-delta", "constant-one", "gaussian", "poly-chirp", "tensor"):
            raise DomainError(f"unknown analytic signal kind {self.kind!r}")
        if self.kind == "gaussian" and not (self.width and self.width > 0):
            raise DomainError("gaussian width must be positive")
        if self.kind == "poly-chirp":
            if self.phase is None or self.phase.dim != self.dim:
                raise DomainError("poly-chirp needs a phase polynomial of matching dimension")
        if self.kind == "tensor" and sum(f.dim for f in self.factors) != self.dim:
            raise DomainError("tensor factor dimensions must sum to the signal dimension")


def delta_signal(dim: int = 1) -> AnalyticSignal:
    return AnalyticSignal("dirac-delta", dim)


def one_signal(dim: int = 1) -> AnalyticSignal:
    return AnalyticSignal("constant-one", dim)


def gaussian_signal(width: float = 1.0, dim: int = 1) -> AnalyticSignal:
    return AnalyticSignal("gaussian", dim, width=width)


def chirp_signal(phase: PolynomialData) -> AnalyticSignal:
    return AnalyticSignal("poly-chirp", phase.dim, phase=phase)


def tensor_signal(u: AnalyticSignal, v: AnalyticSignal) -> AnalyticSignal:
    return AnalyticSignal("tensor", u.dim + v.dim, factors=(u, v))


def gaussian_values(x: np.ndarray, width: float, dim_axis: int = -1) -> np.ndarray:
    """pi^(-d/4) w^(-d/2) exp(-|x|^2 / (2 w^2)) evaluated on points (..., d)."""
    x = np.asarray(x, dtype=float)
    d = x.shape[dim_axis]
    r2 = np.sum(x * x, axis=dim_axis)
    return math.pi ** (-d / 4.0) * width ** (-d / 2.0) * np.exp(-r2 / (2.0 * width ** 2))


def make_gaussian(d: int, n: int, dx: float, width: float = 1.0) -> SampledSignal:
    """Unit-L2 Gaussian of the given width, sampled on the centered grid."""
    if not width > 0.0:
        raise DomainError(f"width must be positive, got {width}")
    half = n * dx / 2.0
    # L2 mass outside the grid cube; erf(X/w) per axis for the squared modulus.
    inside = math.erf(half / width) ** d
    if 1.0 - inside > 1e-10:
        raise ResolutionError(
            f"grid half-width {half} truncates {1.0 - inside:.2e} of the Gaussian mass"
        )
    coords = (np.arange(n) - n // 2) * dx
    axes = np.meshgrid(*([coords] * d), indexing="ij")
    r2 = sum(a * a for a in axes)
    vals = math.pi ** (-d / 4.0) * width ** (-d / 2.0) * np.exp(-r2 / (2.0 * width ** 2))
    return SampledSignal(dx, vals.astype(complex))


def make_chirp(phase: PolynomialData, n: int, dx: float) -> SampledSignal:
    """Unimodular chirp exp(i phase(x)) sampled on the grid, with a Nyquist guard."""
    d = phase.dim
    sig_grid = SampledSignal(dx, np.zeros((n,) * d, dtype=complex)).grid()
    grads = eval_grad(phase, sig_grid)
    worst = float(np.max(np.abs(grads))) * dx
    if worst > 0.9 * math.pi:
        raise AliasingError(
            f"max |grad phase| * dx = {worst:.3f} exceeds the 0.9*pi aliasing guard; "
            "refine dx or shrink the grid"
        )
    vals = np.exp(1j * eval_poly(phase, sig_grid))
    return SampledSignal(dx, vals)


def apply_gaussian_envelope(sig: SampledSignal, width: float) -> SampledSignal:
    """Multiply by exp(-|x|^2/(2 width^2)); used to confine chirps before evolution."""
    if not width > 0.0:
        raise DomainError("envelope width must be positive")
    r2 = np.sum(sig.grid() ** 2, axis=-1)
    return SampledSignal(sig.dx, sig.values * np.exp(-r2 / (2.0 * width ** 2)))


def make_windowed_chirp(phase: PolynomialData, n: int, dx: float,
                        envelope_width: float,
                        guard_level: float = 1e-14) -> SampledSignal:
    """Chirp times a Gaussian envelope, exp(i phase(x) - |x|^2/(2 W^2)).

    The aliasing guard applies where the envelope exceeds guard_level;
    samples outside carry at most that amplitude, so any unresolved phase
    there stays below a classification floor set above guard_level.
    """
    if not envelope_width > 0.0:
        raise DomainError("envelope width must be positive")
    if not 0.0 < guard_level < 1.0:
        raise DomainError("guard level must sit in (0, 1)")
    d = phase.dim
    grid = SampledSignal(dx, np.zeros((n,) * d, dtype=complex)).grid()
    r2 = np.sum(grid ** 2, axis=-1)
    live_r2 = 2.0 * envelope_width ** 2 * math.log(1.0 / guard_level)
    live = r2 <= live_r2
    grads = eval_grad(phase, grid)
    worst = float(np.max(np.abs(grads)[live])) * dx if np.any(live) else 0.0
    if worst > 0.9 * math.pi:
        raise AliasingError(
            f"max |grad phase| * dx = {worst:.3f} on the envelope support exceeds "
            "the 0.9*pi guard; refine dx or narrow the envelope")
    vals = np.exp(1j * eval_poly(phase, grid) - r2 / (2.0 * envelope_width ** 2))
    return SampledSignal(dx, vals)


def _centered_fft(values: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(values)))


def _centered_ifft(values: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(values)))


def fourier(sig: SampledSignal, inverse: bool = False) -> SampledSignal:
    """Fourier transform with the (2 pi)^(-d/2) symmetric normalization.

    The output lives on the dual centered grid with spacing 2 pi/(n dx);
    fourier(fourier(f), inverse=True) recovers f.
    """
    d = sig.dim
    n = sig.n
    if not inverse:
        vals = _centered_fft(sig.values) * (sig.dx ** d) * (2.0 * math.pi) ** (-d / 2.0)
    else:
        vals = _centered_ifft(sig.values) * (n ** d) * (sig.dx ** d) * (2.0 * math.pi) ** (-d / 2.0)
    return SampledSignal(sig.dxi, vals)


def tensor(u: SampledSignal, v: SampledSignal) -> SampledSignal:
    """Tensor product on the shared grid spacing; dimensions add."""
    if abs(u.dx - v.dx) > 1e-12 * max(u.dx, v.dx):
        raise DomainError(f"grid spacings differ: {u.dx} vs {v.dx}")
    if u.n != v.n:
        raise DomainError(f"samples per axis differ: {u.n} vs {v.n}")
    vals = np.multiply.outer(u.values, v.values)
    return SampledSignal(u.dx, vals)
