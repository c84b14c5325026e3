"""Real polynomials in several variables, stored by multi-index.

Used both as chirp phase functions and as evolution symbols.  Coefficients
map a multi-index alpha (tuple of nonnegative ints) to a real number; the
degree is the largest |alpha| carrying a nonzero coefficient.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import DomainError


class PolynomialData:
    """p(x) = sum_alpha c_alpha x^alpha with real coefficients."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict):
        if dim < 1:
            raise DomainError("polynomial dimension must be >= 1")
        clean = {}
        for alpha, c in coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim or any(a < 0 for a in alpha):
                raise DomainError(f"bad multi-index {alpha} for dimension {dim}")
            c = float(c)
            if np.iscomplexobj(c) or isinstance(c, complex):
                raise DomainError("coefficients must be real")
            if c != 0.0:
                clean[alpha] = clean.get(alpha, 0.0) + c
        self.dim = dim
        self.coeffs = clean

    @property
    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(sum(a) for a in self.coeffs)

    def is_homogeneous(self) -> bool:
        orders = {sum(a) for a in self.coeffs}
        return len(orders) <= 1

    def is_even(self) -> bool:
        return all(sum(a) % 2 == 0 for a in self.coeffs)

    def is_odd(self) -> bool:
        return bool(self.coeffs) and all(sum(a) % 2 == 1 for a in self.coeffs)

    def __repr__(self):
        terms = ", ".join(f"{a}: {c}" for a, c in sorted(self.coeffs.items()))
        return f"PolynomialData(dim={self.dim}, {{{terms}}})"


def poly_1d(*coeffs_ascending) -> PolynomialData:
    """Convenience: poly_1d(c0, c1, c2, ...) = c0 + c1 x + c2 x^2 + ..."""
    return PolynomialData(1, {(k,): c for k, c in enumerate(coeffs_ascending)})


def eval_poly(p: PolynomialData, x) -> np.ndarray | float:
    """Evaluate p at x; x has shape (..., dim), result has shape (...)."""
    x = np.asarray(x, dtype=float)
    scalar_1d = p.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1)
    if scalar_1d:
        x = x[..., None]
    if x.shape[-1] != p.dim:
        raise DomainError(f"point dimension {x.shape[-1]} != polynomial dimension {p.dim}")
    out = np.zeros(x.shape[:-1], dtype=float)
    for alpha, c in p.coeffs.items():
        term = np.full(x.shape[:-1], c, dtype=float)
        for j, a in enumerate(alpha):
            if a:
                term = term * x[..., j] ** a
        out = out + term
    if out.ndim == 0:
        return float(out)
    return out


def eval_grad(p: PolynomialData, x) -> np.ndarray:
    """Gradient of p at x; x has shape (..., dim), result shape (..., dim)."""
    x = np.asarray(x, dtype=float)
    scalar_1d = p.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1)
    if scalar_1d:
        x = x[..., None]
    if x.shape[-1] != p.dim:
        raise DomainError(f"point dimension {x.shape[-1]} != polynomial dimension {p.dim}")
    out = np.zeros(x.shape, dtype=float)
    for alpha, c in p.coeffs.items():
        for j, a in enumerate(alpha):
            if a == 0:
                continue
            term = np.full(x.shape[:-1], c * a, dtype=float)
            for k, ak in enumerate(alpha):
                pw = ak - 1 if k == j else ak
                if pw:
                    term = term * x[..., k] ** pw
            out[..., j] += term
    return out


def principal_part(p: PolynomialData) -> PolynomialData:
    """Top-degree homogeneous component."""
    m = p.degree
    return PolynomialData(p.dim, {a: c for a, c in p.coeffs.items() if sum(a) == m})


def iter_multi_indices(dim: int, max_total: int):
    """All alpha in N^dim with |alpha| <= max_total."""
    for alpha in product(range(max_total + 1), repeat=dim):
        if sum(alpha) <= max_total:
            yield alpha
