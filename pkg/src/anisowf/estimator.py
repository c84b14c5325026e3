"""Wave-front-set estimation from STFT decay along anisotropic curves.

Every sampled sphere direction gets a decay profile |V u| at the curve
points (lambda^t x0, lambda^s xi0).  Classification follows the conic
neighborhood criterion: the profile fitted for a direction is the maximum
over profiles of directions within a small cone (cone_steps grid steps),
and a direction is singular when the fitted exponential rate stays at or
below the threshold while the profile tail is still above the numeric
floor.  Pure per-curve classification is cone_steps = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveRangeError, DomainError, GraphConditionError
from .geometry import AnisoIndex, PhasePoint, SphereDirection, scale_point
from .signals import AnalyticSignal, SampledSignal
from .stft import WindowSpec, stft_point

DEFAULT_FLOOR = 1e-14
DEFAULT_THRESHOLD = 1.0
DEFAULT_SPHERE_SAMPLES = 720
DEFAULT_N_LAMBDA = 24
LAMBDA_MIN = 2.0
_MIN_REACHABLE = 8


@dataclass(frozen=True)
class RateFit:
    """Least-squares exponential rate of a decay profile.

    rhat is +inf (super-exponential sentinel) when fewer than three samples
    sit above the numeric floor.
    """

    rhat: float
    intercept: float
    residual: float
    n_valid: int


@dataclass(frozen=True)
class DecayProfile:
    direction: SphereDirection
    lambdas: np.ndarray
    magnitudes: np.ndarray
    floor: float

    def __post_init__(self):
        if self.lambdas.size < _MIN_REACHABLE:
            raise CurveRangeError(f"profile needs >= {_MIN_REACHABLE} samples")
        if np.any(np.diff(self.lambdas) <= 0):
            raise DomainError("lambda samples must be strictly increasing")

    @property
    def floor_mask(self) -> np.ndarray:
        return self.magnitudes < self.floor


@dataclass(frozen=True)
class WFEntry:
    direction: SphereDirection
    fit: RateFit
    singular: bool


@dataclass(frozen=True)
class WFEstimate:
    idx: AnisoIndex
    entries: list
    r_threshold: float
    profiles: list = field(default=None, repr=False, compare=False)

    def singular_directions(self) -> list:
        return [e.direction for e in self.entries if e.singular]


def geometric_lambdas(lo: float, hi: float, n: int) -> np.ndarray:
    if not (hi > lo > 0.0 and n >= _MIN_REACHABLE):
        raise DomainError(f"bad lambda range ({lo}, {hi}) x {n}")
    return np.geomspace(lo, hi, n)


def fit_rate_arrays(lambdas: np.ndarray, magnitudes: np.ndarray, floor: float) -> RateFit:
    valid = np.isfinite(magnitudes) & (magnitudes >= floor) & (magnitudes > 0.0)
    n_valid = int(np.count_nonzero(valid))
    if n_valid < 3:
        return RateFit(math.inf, 0.0, 0.0, n_valid)
    lam = lambdas[valid]
    logm = np.log(magnitudes[valid])
    slope, intercept = np.polyfit(lam, logm, 1)
    resid = logm - (slope * lam + intercept)
    return RateFit(-float(slope), float(intercept),
                   float(np.sqrt(np.mean(resid ** 2))), n_valid)


def fit_rate(profile: DecayProfile) -> RateFit:
    """Fitted rate r in |V| ~ C exp(-r lambda) over above-floor samples."""
    return fit_rate_arrays(profile.lambdas, profile.magnitudes, profile.floor)


def curve_reach(u, idx: AnisoIndex, z0: SphereDirection,
                reach_frac=(0.8, 0.8), xi_reach_abs: float | None = None) -> float:
    """Largest lambda keeping the curve point inside the usable grid region.

    Analytic signals have unbounded reach.  reach_frac scales the position
    extent and the Nyquist frequency; xi_reach_abs optionally caps frequency
    excursions at an absolute value (tighter than the Nyquist fraction),
    e.g. to keep curves inside a mollifier's passband.
    """
    if isinstance(u, AnalyticSignal):
        return math.inf
    frac_x, frac_xi = reach_frac
    x_lim = frac_x * u.extent
    xi_lim = frac_xi * math.pi / u.dx
    if xi_reach_abs is not None:
        xi_lim = min(xi_lim, xi_reach_abs)
    cap = math.inf
    mx = float(np.max(np.abs(z0.x)))
    mxi = float(np.max(np.abs(z0.xi)))
    if mx > 0.0:
        cap = min(cap, (x_lim / mx) ** (1.0 / idx.t))
    if mxi > 0.0:
        cap = min(cap, (xi_lim / mxi) ** (1.0 / idx.s))
    return cap


def decay_profile(u, w: WindowSpec, idx: AnisoIndex, z0: SphereDirection,
                  lambda_range=(LAMBDA_MIN, 50.0), n_samples: int = DEFAULT_N_LAMBDA,
                  floor: float = DEFAULT_FLOOR, reach_frac=(0.8, 0.8)) -> DecayProfile:
    """|V u| along the anisotropic curve through z0, clipped to the grid reach."""
    lambdas = geometric_lambdas(lambda_range[0], lambda_range[1], n_samples)
    cap = curve_reach(u, idx, z0, reach_frac)
    if cap < lambdas[-1]:
        kept = lambdas[lambdas <= cap]
        if kept.size < _MIN_REACHABLE:
            raise CurveRangeError(
                f"only {kept.size} of {n_samples} curve samples reachable for {z0}")
        warnings.warn(f"curve through {z0.z.tolist()} clipped at lambda = {cap:.3g}",
                      stacklevel=2)
        lambdas = kept
    mags = _curve_magnitudes(u, w, idx, z0, lambdas)
    return DecayProfile(z0, lambdas, mags, floor)


def _curve_magnitudes(u, w, idx, z0, lambdas) -> np.ndarray:
    pts = [scale_point(idx, z0.as_point(), float(lam)) for lam in lambdas]
    return np.array([abs(stft_point(u, w, p)) for p in pts], dtype=float)


def circle_directions(n: int) -> list:
    """Uniform directions on the circle S^1 (d = 1 phase space)."""
    thetas = 2.0 * math.pi * np.arange(n) / n
    return [SphereDirection(np.array([math.cos(t), math.sin(t)])) for t in thetas]


def _classify(lambdas, mag_matrix, floor, threshold):
    """Per-direction fits and singular flags from a (dirs x lambdas) magnitude table.

    NaN marks unreachable curve samples.  A direction is singular when the
    fitted rate is at or below the threshold (ties singular, conservative)
    and the last reachable magnitude sits above the floor.
    """
    n_dirs = mag_matrix.shape[0]
    fits = []
    flags = np.zeros(n_dirs, dtype=bool)
    for i in range(n_dirs):
        row = mag_matrix[i]
        reach = np.isfinite(row)
        if np.count_nonzero(reach) < _MIN_REACHABLE:
            fits.append(RateFit(math.inf, 0.0, 0.0, 0))
            continue
        fit = fit_rate_arrays(lambdas[reach], row[reach], floor)
        fits.append(fit)
        last = row[reach][-1]
        flags[i] = (fit.rhat <= threshold) and (last >= floor)
    return fits, flags


def estimate_wf(u, w: WindowSpec, idx: AnisoIndex,
                sphere_samples: int = DEFAULT_SPHERE_SAMPLES,
                lambda_range=(LAMBDA_MIN, 50.0), n_lambda: int = DEFAULT_N_LAMBDA,
                r_threshold: float = DEFAULT_THRESHOLD, floor: float = DEFAULT_FLOOR,
                cone_steps: int = 1, reach_frac=(0.8, 0.8),
                keep_profiles: bool = False) -> WFEstimate:
    """Sweep the circle of directions and classify each one (d = 1 signals)."""
    dim = u.dim if isinstance(u, (SampledSignal, AnalyticSignal)) else None
    if dim != 1:
        raise DomainError("estimate_wf sweeps d = 1 signals; use estimate_kernel_wf in 4d")
    if sphere_samples < 90:
        raise DomainError("need at least 90 sphere samples for a d = 1 sweep")

    dirs = circle_directions(sphere_samples)
    lambdas = geometric_lambdas(lambda_range[0], lambda_range[1], n_lambda)

    mags = np.full((sphere_samples, n_lambda), np.nan)
    for i, z0 in enumerate(dirs):
        cap = curve_reach(u, idx, z0, reach_frac)
        sel = lambdas <= cap
        if np.count_nonzero(sel) < _MIN_REACHABLE:
            continue
        mags[i, sel] = _curve_magnitudes(u, w, idx, z0, lambdas[sel])

    cone = _cone_max_circle(mags, cone_steps)
    fits, flags = _classify(lambdas, cone, floor, r_threshold)
    entries = [WFEntry(dirs[i], fits[i], bool(flags[i])) for i in range(sphere_samples)]
    profiles = None
    if keep_profiles:
        profiles = [
            DecayProfile(dirs[i], lambdas[np.isfinite(mags[i])],
                         mags[i][np.isfinite(mags[i])], floor)
            if np.count_nonzero(np.isfinite(mags[i])) >= _MIN_REACHABLE else None
            for i in range(sphere_samples)
        ]
    return WFEstimate(idx, entries, r_threshold, profiles)


def _cone_max_circle(mags: np.ndarray, cone_steps: int) -> np.ndarray:
    """Running max over +-cone_steps neighboring directions (circular)."""
    if cone_steps <= 0:
        return mags
    out = mags.copy()
    for k in range(1, cone_steps + 1):
        for shift in (k, -k):
            out = np.fmax(out, np.roll(mags, shift, axis=0))
    return out


# ---------------------------------------------------------------------------
# 4d kernel sweeps


def product_sphere4(n_psi: int, n_a: int, n_b: int, n_circle: int) -> np.ndarray:
    """Product sweep of S^3: mixing angle psi between the paired 2-planes
    (x, xi)-block and (y, eta)-block, with dense pure-plane circles."""
    dirs = []
    for t in 2.0 * math.pi * np.arange(n_circle) / n_circle:
        dirs.append([math.cos(t), 0.0, math.sin(t), 0.0])
        dirs.append([0.0, math.cos(t), 0.0, math.sin(t)])
    psis = (np.arange(1, n_psi + 1)) * (math.pi / 2.0) / (n_psi + 1)
    for psi in psis:
        c, s = math.cos(psi), math.sin(psi)
        for a in 2.0 * math.pi * np.arange(n_a) / n_a:
            for b in 2.0 * math.pi * np.arange(n_b) / n_b:
                dirs.append([c * math.cos(a), s * math.cos(b),
                             c * math.sin(a), s * math.sin(b)])
    return np.unique(np.round(np.array(dirs), 15), axis=0)


def fibonacci_cap(center: np.ndarray, radius: float, count: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Low-discrepancy points in a spherical cap around a unit 4-vector.

    Tangent offsets follow a Fibonacci-style lattice in the 3-ball (radius
    shells times a 2-sphere spiral) with a small seeded jitter, pushed onto
    the sphere by the exponential map.
    """
    basis = _tangent_basis(center)
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    pts = []
    for k in range(count):
        r = radius * ((k + 0.5) / count) ** (1.0 / 3.0)
        z = 1.0 - 2.0 * ((k + 0.5) % count) / count
        phi = 2.0 * math.pi * ((k / golden) % 1.0)
        rho = math.sqrt(max(0.0, 1.0 - z * z))
        v3 = np.array([rho * math.cos(phi), rho * math.sin(phi), z])
        v3 = v3 + 1e-3 * rng.standard_normal(3)
        v3 *= r / np.linalg.norm(v3)
        tangent = basis @ v3
        norm_t = np.linalg.norm(tangent)
        pt = math.cos(norm_t) * center + math.sin(norm_t) * tangent / norm_t
        pts.append(pt / np.linalg.norm(pt))
    return np.array(pts)


def _tangent_basis(center: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at a unit 4-vector, as columns."""
    m = np.concatenate([center[:, None], np.eye(4)], axis=1)
    q, _ = np.linalg.qr(m)
    return q[:, 1:4]


def _kernel_curve_mags(K, w, idx, z, lambdas):
    d2 = z.size // 2
    pts = [scale_point(idx, PhasePoint(z[:d2], z[d2:]), float(lam)) for lam in lambdas]
    return np.array([abs(stft_point(K, w, p)) for p in pts], dtype=float)


def estimate_kernel_wf(K, w: WindowSpec, idx: AnisoIndex,
                       sweep=(8, 24, 24, 64), max_directions: int = 8000,
                       lambda_range=(LAMBDA_MIN, 50.0), n_lambda: int = DEFAULT_N_LAMBDA,
                       r_threshold: float = DEFAULT_THRESHOLD,
                       floor: float = DEFAULT_FLOOR, reach_frac=(0.8, 0.8),
                       xi_reach_abs: float | None = None,
                       refine: int = 24, seed: int = 0) -> WFEstimate:
    """Estimate the wave front set of a kernel (a d = 2 signal, phase space R^4).

    Coarse product sweep of S^3, then Fibonacci-cap refinement around the
    lowest-rate directions.  Classification is per curve (no cone maximum:
    the sweep is too coarse for neighbor aggregation to mean anything).
    """
    if K.dim != 2:
        raise DomainError("estimate_kernel_wf expects a kernel sampled in dimension 2")
    dirs = product_sphere4(*sweep)
    if dirs.shape[0] > max_directions:
        raise DomainError(f"sweep of {dirs.shape[0]} directions exceeds budget {max_directions}")

    lambdas = geometric_lambdas(lambda_range[0], lambda_range[1], n_lambda)
    rng = np.random.default_rng(seed)

    def classify(block: np.ndarray):
        mags = np.full((block.shape[0], n_lambda), np.nan)
        for i, z in enumerate(block):
            cap = curve_reach(K, idx, SphereDirection(z), reach_frac, xi_reach_abs)
            sel = lambdas <= cap
            if np.count_nonzero(sel) < _MIN_REACHABLE:
                continue
            mags[i, sel] = _kernel_curve_mags(K, w, idx, z, lambdas[sel])
        return _classify(lambdas, mags, floor, r_threshold)

    fits, flags = classify(dirs)

    # refinement caps around detected directions and the best near-misses
    finite_rates = np.array([f.rhat if math.isfinite(f.rhat) else np.inf for f in fits])
    order = np.argsort(finite_rates)
    seed_ids = list(np.nonzero(flags)[0])
    for i in order:
        if len(seed_ids) >= 48:
            break
        if i not in seed_ids and math.isfinite(finite_rates[i]):
            seed_ids.append(int(i))
    spacing = math.pi / (min(sweep[1], sweep[2]) or 1)
    budget = max_directions - dirs.shape[0]
    refined = []
    if seed_ids and refine > 0 and budget > 0:
        per = min(refine, budget // len(seed_ids)) if len(seed_ids) else 0
        for i in seed_ids:
            if per > 0:
                refined.append(fibonacci_cap(dirs[i], spacing, per, rng))
    if refined:
        extra = np.concatenate(refined, axis=0)
        efits, eflags = classify(extra)
        dirs = np.concatenate([dirs, extra], axis=0)
        fits = fits + efits
        flags = np.concatenate([flags, eflags])

    entries = [WFEntry(SphereDirection(dirs[i]), fits[i], bool(flags[i]))
               for i in range(dirs.shape[0])]
    return WFEstimate(idx, entries, r_threshold)


# ---------------------------------------------------------------------------
# kernel graph condition and cone constant


def _plane_angles(z: np.ndarray) -> tuple[float, float]:
    """Angles from a unit (x, y, xi, eta) direction to the two forbidden planes.

    Plane 1 is {(x, 0, xi, 0)}; plane 2 is {(0, y, 0, -eta)} (as a set the
    sign of eta is immaterial).
    """
    d2 = z.size // 2
    d = d2 // 2
    x, y = z[:d], z[d:d2]
    xi, eta = z[d2:d2 + d], z[d2 + d:]
    off1 = math.sqrt(float(np.dot(y, y) + np.dot(eta, eta)))
    off2 = math.sqrt(float(np.dot(x, x) + np.dot(xi, xi)))
    return math.asin(min(1.0, off1)), math.asin(min(1.0, off2))


def check_graph_condition(wf: WFEstimate, eps_angle: float) -> dict:
    """Empty-ness of the two axis traces of a kernel wave front set."""
    offenders = []
    wf1_empty = True
    wf2_empty = True
    for e in wf.entries:
        if not e.singular:
            continue
        a1, a2 = _plane_angles(e.direction.z)
        if a1 < eps_angle:
            wf1_empty = False
            offenders.append({"direction": e.direction.z.tolist(), "plane": 1, "angle": a1})
        if a2 < eps_angle:
            wf2_empty = False
            offenders.append({"direction": e.direction.z.tolist(), "plane": 2, "angle": a2})
    return {"wf1_empty": wf1_empty, "wf2_empty": wf2_empty, "offenders": offenders}


def cone_constant(wf: WFEstimate, idx: AnisoIndex, block_tol: float = 1e-9) -> float:
    """Smallest sampled c >= 1 bounding |y|^(1/t)+|eta|^(1/s) against |x|^(1/t)+|xi|^(1/s).

    Empty singular sets give the vacuous c = 1; a singular direction with a
    vanishing block violates the graph condition.
    """
    c = 1.0
    for e in wf.entries:
        if not e.singular:
            continue
        z = e.direction.z
        d2 = z.size // 2
        d = d2 // 2
        x, y = z[:d], z[d:d2]
        xi, eta = z[d2:d2 + d], z[d2 + d:]
        rho_in = np.linalg.norm(x) ** (1.0 / idx.t) + np.linalg.norm(xi) ** (1.0 / idx.s)
        rho_out = np.linalg.norm(y) ** (1.0 / idx.t) + np.linalg.norm(eta) ** (1.0 / idx.s)
        if rho_in < block_tol or rho_out < block_tol:
            raise GraphConditionError(
                f"singular direction {z.tolist()} has a vanishing block")
        ratio = rho_out / rho_in
        c = max(c, ratio, 1.0 / ratio)
    return c
