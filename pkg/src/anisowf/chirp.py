"""Predicted wave front sets of polynomial-phase chirps exp(i phi(x)).

Three index regimes relative to the phase order m:
  s = t(m-1)  -> the graph of grad(phi_m) away from x = 0,
  s > t(m-1)  -> the punctured position axis,
  s < t(m-1)  -> the punctured frequency axis (elliptic phases only).
Equality of the predicted set (not just containment) holds for d = 1 with
even or odd phases in the first two regimes, and even phases in the third.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedRegimeError
from .geometry import AnisoIndex, angle_between, project_many
from .poly import PolynomialData, eval_grad, eval_poly, principal_part

_REGIME_TOL = 1e-12


@dataclass(frozen=True)
class WFPrediction:
    kind: str            # gradient-graph | x-axis | xi-axis
    idx: AnisoIndex
    directions: np.ndarray   # sampled unit directions, shape (N, 2d)
    equality: bool


def is_elliptic(phase_principal: PolynomialData, sphere_samples: int = 360) -> bool:
    """No zero of a homogeneous polynomial on the unit sphere (within 1e-9)."""
    if not phase_principal.is_homogeneous():
        raise DomainError("ellipticity is defined for homogeneous polynomials")
    d = phase_principal.dim
    if d == 1:
        pts = np.array([[1.0], [-1.0]])
    elif d == 2:
        th = 2.0 * math.pi * np.arange(sphere_samples) / sphere_samples
        pts = np.stack([np.cos(th), np.sin(th)], axis=1)
    else:
        rng = np.random.default_rng(0)
        pts = rng.standard_normal((sphere_samples, d))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    vals = eval_poly(phase_principal, pts)
    return bool(np.min(np.abs(vals)) > 1e-9)


def _graph_directions(phase_m: PolynomialData, idx: AnisoIndex,
                      n_radial: int = 400, n_angular: int = 64) -> np.ndarray:
    """Projections of (x, grad phi_m(x)) over a log-spaced sweep of x."""
    d = phase_m.dim
    radii = np.geomspace(1e-2, 1e2, n_radial)
    if d == 1:
        xs = np.concatenate([radii, -radii])[:, None]
    else:
        th = 2.0 * math.pi * np.arange(n_angular) / n_angular
        if d == 2:
            units = np.stack([np.cos(th), np.sin(th)], axis=1)
        else:
            rng = np.random.default_rng(1)
            units = rng.standard_normal((n_angular, d))
            units /= np.linalg.norm(units, axis=1, keepdims=True)
        xs = (radii[:, None, None] * units[None, :, :]).reshape(-1, d)
    grads = eval_grad(phase_m, xs)
    keep = np.linalg.norm(xs, axis=1) > 0
    return project_many(idx, xs[keep], grads[keep])


def _axis_directions(d: int, axis: str) -> np.ndarray:
    dirs = []
    for j in range(d):
        e = np.zeros(2 * d)
        pos = j if axis == "x" else d + j
        for sign in (1.0, -1.0):
            e2 = e.copy()
            e2[pos] = sign
            dirs.append(e2)
    return np.array(dirs)


def predict_chirp_wf(phase: PolynomialData, idx: AnisoIndex) -> WFPrediction:
    """Closed-form predicted singular directions for the chirp exp(i phase)."""
    m = phase.degree
    if m < 2:
        raise DomainError(f"chirp phase order must be >= 2, got {m}")
    d = phase.dim
    pm = principal_part(phase)
    tm1 = idx.t * (m - 1)
    one_d_parity = d == 1 and (phase.is_even() or phase.is_odd())

    if abs(idx.s - tm1) <= _REGIME_TOL:
        if not idx.t > 1.0 / (m - 1):
            raise UnsupportedRegimeError(
                f"graph regime needs t > 1/(m-1), got t = {idx.t}")
        dirs = _graph_directions(pm, idx)
        return WFPrediction("gradient-graph", idx, np.unique(np.round(dirs, 12), axis=0),
                            equality=one_d_parity)
    if idx.s > tm1:
        # the regularity index itself must admit compactly supported windows;
        # t(m-1) = 1 exactly is admitted (it appears in the reference fixtures)
        if not (idx.s > 1.0 and tm1 >= 1.0 - _REGIME_TOL):
            raise UnsupportedRegimeError(
                f"position-axis regime needs s > t(m-1) >= 1, got t(m-1) = {tm1}")
        return WFPrediction("x-axis", idx, _axis_directions(d, "x"),
                            equality=one_d_parity)
    # s < t(m-1): frequency axis, elliptic principal part required
    if not idx.s > 1.0:
        raise UnsupportedRegimeError(
            f"frequency-axis regime needs t(m-1) > s > 1, got s = {idx.s}")
    if not is_elliptic(pm):
        raise DomainError("frequency-axis prediction requires an elliptic principal part")
    return WFPrediction("xi-axis", idx, _axis_directions(d, "xi"),
                        equality=(d == 1 and phase.is_even()))


def compare_wf(estimate, prediction: WFPrediction, tol_angle: float) -> dict:
    """Estimated-versus-predicted report.

    Violations: detected singular directions farther than tol_angle from the
    predicted set.  Misses (only when the prediction claims equality):
    predicted directions with no detected match within tol_angle.
    """
    detected = [e.direction.z for e in estimate.entries if e.singular]
    pred = prediction.directions
    violations = []
    max_err = 0.0
    for z in detected:
        err = min(angle_between(z, g) for g in pred)
        max_err = max(max_err, err)
        if err > tol_angle:
            violations.append({"direction": z.tolist(), "angle": err})
    misses = []
    if prediction.equality:
        for g in pred:
            if not detected:
                misses.append({"direction": g.tolist()})
                continue
            err = min(angle_between(np.asarray(z), g) for z in detected)
            if err > tol_angle:
                misses.append({"direction": g.tolist(), "angle": err})
    return {
        "violations": violations,
        "misses": misses,
        "max_angle_error": max_err,
        "n_detected": len(detected),
        "pass": not violations and not misses,
    }
