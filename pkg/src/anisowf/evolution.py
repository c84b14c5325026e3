"""Spectral solver for d_t u + i p(D) u = 0 and its Schwartz kernel.

The solution is the Fourier multiplier exp(-i t p(xi)); the kernel is the
convolution kernel k_t = (2 pi)^(-d/2) F^(-1)(exp(-i t p)) arranged as
K_t(x, y) = k_t(x - y).  Sampling k_t requires a frequency-domain Gaussian
mollifier, since k_t itself is only a tempered distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, DomainError, UnsupportedRegimeError
from .geometry import AnisoIndex, PhasePoint, SphereDirection, project
from .poly import PolynomialData, eval_grad, eval_poly, principal_part
from .signals import SampledSignal, fourier

_TWO_PI = 2.0 * math.pi
_REGIME_TOL = 1e-12


@dataclass(frozen=True)
class EvolutionSpec:
    """Real polynomial symbol of order >= 2 and an evolution time."""

    symbol: PolynomialData
    time: float

    def __post_init__(self):
        if self.symbol.degree < 2:
            raise DomainError(f"symbol order must be >= 2, got {self.symbol.degree}")

    @property
    def order(self) -> int:
        return self.symbol.degree


def _freq_mesh(sig: SampledSignal):
    axes = [sig.freq_coords()] * sig.dim
    return np.meshgrid(*axes, indexing="ij")


def _phase_guard(spec: EvolutionSpec, pvals: np.ndarray, n: int):
    """Reject when t * p jumps more than 0.9 pi between adjacent bins."""
    worst = 0.0
    for axis in range(pvals.ndim):
        worst = max(worst, float(np.max(np.abs(np.diff(pvals, axis=axis)))))
    worst *= abs(spec.time)
    if worst > 0.9 * math.pi:
        # halving the bin spacing scales the jump roughly linearly
        factor = worst / (0.9 * math.pi)
        suggestion = n * 2 ** max(1, math.ceil(math.log2(factor)))
        raise AliasingError(
            f"t * (p jump per frequency bin) = {worst:.3f} exceeds 0.9*pi; "
            f"suggest n = {suggestion} at the same dx")


def propagate(u0: SampledSignal, spec: EvolutionSpec) -> SampledSignal:
    """Apply exp(-i t p(D)): forward transform, unimodular multiplier, inverse."""
    if spec.symbol.dim != u0.dim:
        raise DomainError("symbol dimension does not match the signal")
    uhat = fourier(u0)
    mesh = np.stack(_freq_mesh(u0), axis=-1)
    pvals = eval_poly(spec.symbol, mesh)
    _phase_guard(spec, pvals, u0.n)
    evolved = SampledSignal(uhat.dx, uhat.values * np.exp(-1j * spec.time * pvals))
    return fourier(evolved, inverse=True)


def kernel_signal(spec: EvolutionSpec, n: int, dx: float,
                  moll_width: float | None = None) -> SampledSignal:
    """Mollified Schwartz kernel K_t(x, y) = k_t(x - y) on the n x n grid (d = 1).

    k_t is computed on a doubled 1-d grid so every difference x_i - y_j is
    covered; moll_width defaults to a quarter of the Nyquist frequency.
    """
    if spec.symbol.dim != 1:
        raise DomainError("kernel synthesis is implemented for d = 1 symbols")
    if moll_width is None:
        moll_width = 0.25 * math.pi / dx
    if not moll_width > 0.0:
        raise DomainError("mollifier width must be positive")
    n2 = 2 * n
    dxi2 = _TWO_PI / (n2 * dx)
    xi = (np.arange(n2) - n2 // 2) * dxi2
    pvals = eval_poly(spec.symbol, xi[:, None])
    _phase_guard(spec, pvals, n2)
    mult = np.exp(-1j * spec.time * pvals) * np.exp(-xi * xi / (2.0 * moll_width ** 2))
    spectral = SampledSignal(dxi2, mult.astype(complex))
    k_line = fourier(spectral, inverse=True).values * _TWO_PI ** -0.5
    i = np.arange(n)
    offsets = i[:, None] - i[None, :] + n  # x_i - y_j in grid units, into the 2n line
    return SampledSignal(dx, k_line[offsets])


def hamiltonian_flow(spec: EvolutionSpec, p0: PhasePoint) -> PhasePoint:
    """chi_t(x0, xi0) = (x0 + t grad p_m(xi0), xi0) for the principal part p_m."""
    if p0.is_zero():
        raise DomainError("the flow is defined away from the origin")
    pm = principal_part(spec.symbol)
    return PhasePoint(p0.x + spec.time * eval_grad(pm, p0.xi), p0.xi)


def predict_transport(directions, spec: EvolutionSpec, idx: AnisoIndex) -> list:
    """Image of a direction set under the propagation theorem.

    For t = s(m-1) each direction moves along the Hamiltonian flow of the
    principal symbol (representative-independent by conic invariance); for
    t > s(m-1) the set is unchanged.  Other index pairs are not covered.
    """
    m = spec.order
    sm1 = idx.s * (m - 1)
    if not sm1 > 1.0:
        raise UnsupportedRegimeError(f"need s(m-1) > 1, got {sm1}")
    if abs(idx.t - sm1) <= _REGIME_TOL:
        out = []
        for z0 in directions:
            moved = hamiltonian_flow(spec, z0.as_point())
            out.append(project(idx, moved))
        return out
    if idx.t > sm1:
        return [SphereDirection(z0.z.copy()) for z0 in directions]
    raise UnsupportedRegimeError(
        f"transport is stated for t >= s(m-1) > 1, got t = {idx.t}, s(m-1) = {sm1}")
