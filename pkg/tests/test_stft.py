import math

import numpy as np
import pytest

from anisowf.errors import DomainError, ResolutionError, TruncationError
from anisowf.geometry import AnisoIndex, PhasePoint
from anisowf.poly import poly_1d
from anisowf.signals import (chirp_signal, delta_signal, gaussian_signal,
                             make_chirp, make_gaussian, one_signal,
                             tensor_signal)
from anisowf.stft import (WindowSpec, classical_seminorm, istft, moyal_error,
                          stft_grid, stft_point, stft_seminorm)

TWO_PI = 2.0 * math.pi


def oracle_stft_1d(u_func, width, x, xi, half=30.0, npts=200001):
    """Independent oracle: brute-force quadrature of the defining integral."""
    y = np.linspace(x - half, x + half, npts)
    win = math.pi ** -0.25 * width ** -0.5 * np.exp(-(y - x) ** 2 / (2 * width ** 2))
    vals = u_func(y) * win * np.exp(-1j * y * xi)
    return np.trapezoid(vals, y) / math.sqrt(TWO_PI)


class TestPointClosedForms:
    def test_constant_one_matches_quadrature(self):
        # |V 1(x, xi)| is x-independent and equals |hat phi(xi)| = pi^(-1/4) e^(-xi^2/2)
        w = WindowSpec(1.0)
        sig = one_signal(1)
        for x, xi in [(0.0, 0.0), (3.2, 0.0), (-1.0, 1.3), (5.0, -2.1)]:
            got = stft_point(sig, w, PhasePoint(x, xi))
            want = oracle_stft_1d(lambda y: np.ones_like(y), 1.0, x, xi)
            assert got == pytest.approx(want, abs=1e-10)
            assert abs(got) == pytest.approx(math.pi ** -0.25 * math.exp(-xi * xi / 2),
                                             abs=1e-12)

    def test_window_against_itself_at_origin(self):
        # (2 pi)^(-1/2) ||phi||^2 = (2 pi)^(-1/2) for the unit window
        w = WindowSpec(1.0)
        got = stft_point(gaussian_signal(1.0), w, PhasePoint(0.0, 0.0))
        assert got == pytest.approx(TWO_PI ** -0.5, abs=1e-13)

    def test_delta_xi_independent(self):
        w = WindowSpec(1.0)
        sig = delta_signal(1)
        mags = [abs(stft_point(sig, w, PhasePoint(0.7, xi))) for xi in (-3.0, 0.0, 4.0)]
        assert max(mags) - min(mags) == pytest.approx(0.0, abs=1e-15)
        # V delta(x, xi) = (2 pi)^(-1/2) conj(phi)(-x)
        want = TWO_PI ** -0.5 * math.pi ** -0.25 * math.exp(-0.49 / 2)
        assert mags[0] == pytest.approx(want, abs=1e-13)

    def test_gaussian_pair_matches_quadrature(self):
        w = WindowSpec(1.3)
        sig = gaussian_signal(0.8)
        for x, xi in [(0.0, 0.0), (1.1, -0.9), (-2.0, 2.5)]:
            got = stft_point(sig, w, PhasePoint(x, xi))
            want = oracle_stft_1d(
                lambda y: math.pi ** -0.25 * 0.8 ** -0.5 * np.exp(-y * y / (2 * 0.64)),
                1.3, x, xi)
            assert got == pytest.approx(want, abs=1e-10)

    def test_quadratic_chirp_matches_quadrature(self):
        w = WindowSpec(1.0)
        sig = chirp_signal(poly_1d(0.3, -0.5, 1.0))
        for x, xi in [(0.0, 0.0), (2.0, 4.0), (-1.5, 2.0), (4.0, -3.0)]:
            got = stft_point(sig, w, PhasePoint(x, xi))
            want = oracle_stft_1d(
                lambda y: np.exp(1j * (0.3 - 0.5 * y + y * y)), 1.0, x, xi)
            assert got == pytest.approx(want, abs=1e-9)

    def test_cubic_chirp_quadrature_path(self):
        w = WindowSpec(1.0)
        sig = chirp_signal(poly_1d(0.0, 0.0, 0.0, 1.0))
        for x, xi in [(1.0, 3.0), (2.0, 12.0), (0.0, -2.0)]:
            got = stft_point(sig, w, PhasePoint(x, xi))
            want = oracle_stft_1d(lambda y: np.exp(1j * y ** 3), 1.0, x, xi)
            assert got == pytest.approx(want, abs=1e-8)

    def test_tensor_product_factorizes(self):
        w = WindowSpec(1.0)
        pair = tensor_signal(one_signal(1), delta_signal(1))
        p = PhasePoint([1.2, 0.4], [0.3, -2.0])
        got = stft_point(pair, w, p)
        v1 = stft_point(one_signal(1), w, PhasePoint(1.2, 0.3))
        v2 = stft_point(delta_signal(1), w, PhasePoint(0.4, -2.0))
        assert got == pytest.approx(v1 * v2, abs=1e-14)


class TestPointSampled:
    def test_sampled_gaussian_matches_closed_form(self):
        u = make_gaussian(1, 512, 0.05)
        w = WindowSpec(1.0)
        ana = gaussian_signal(1.0)
        for x, xi in [(0.0, 0.0), (1.0, 2.0), (-3.3, -7.0), (2.7, 20.0)]:
            got = stft_point(u, w, PhasePoint(x, xi))
            want = stft_point(ana, w, PhasePoint(x, xi))
            assert got == pytest.approx(want, abs=1e-9)

    def test_off_lattice_center(self):
        u = make_gaussian(1, 512, 0.05)
        w = WindowSpec(1.0)
        p = PhasePoint(0.5 * 0.05 + 1.0, 0.77)  # x between grid nodes
        got = stft_point(u, w, p)
        want = stft_point(gaussian_signal(1.0), w, p)
        assert got == pytest.approx(want, abs=1e-9)

    def test_truncation_flag(self):
        u = make_gaussian(1, 512, 0.05)  # extent 12.8
        with pytest.raises(TruncationError):
            stft_point(u, WindowSpec(1.0), PhasePoint(11.0, 0.0))
        with pytest.raises(TruncationError):
            stft_point(u, WindowSpec(1.0), PhasePoint(0.0, 100.0))  # beyond Nyquist

    def test_sampled_2d_matches_tensor_closed_form(self):
        g = make_gaussian(2, 64, 0.25)
        w = WindowSpec(1.0)
        ana = gaussian_signal(1.0, dim=2)
        p = PhasePoint([0.7, -0.3], [1.1, 0.6])
        got = stft_point(g, w, p)
        want = stft_point(ana, w, p)
        assert got == pytest.approx(want, abs=1e-9)


class TestGridAndInversion:
    def test_grid_agrees_with_point(self):
        u = make_gaussian(1, 256, 0.1)
        w = WindowSpec(1.0)
        grid = stft_grid(u, w)
        rng = np.random.default_rng(3)
        xs = grid.positions()
        xis = grid.frequencies()
        for _ in range(100):
            i = int(rng.integers(40, 216))
            j = int(rng.integers(0, 256))
            want = stft_point(u, w, PhasePoint(xs[i], xis[j]))
            assert grid.values[i, j] == pytest.approx(want, abs=1e-8)

    def test_gaussian_bump_centered(self):
        u = make_gaussian(1, 256, 0.1)
        grid = stft_grid(u, WindowSpec(1.0))
        mags = np.abs(grid.values)
        i, j = np.unravel_index(np.argmax(mags), mags.shape)
        assert (i, j) == (128, 128)
        # |V|(x, xi) = (2 pi)^(-1/2) exp(-(x^2 + xi^2)/4) for equal unit widths
        want = TWO_PI ** -0.5 * np.exp(
            -(grid.positions()[:, None] ** 2 + grid.frequencies()[None, :] ** 2) / 4)
        np.testing.assert_allclose(mags, want, atol=1e-8)

    def test_moyal(self):
        u = make_gaussian(1, 512, 0.05)
        grid = stft_grid(u, WindowSpec(1.0))
        assert moyal_error(u, grid) <= 1e-6

    def test_moyal_random_signal(self):
        rng = np.random.default_rng(9)
        from anisowf.signals import SampledSignal
        x = (np.arange(512) - 256) * 0.05
        vals = (rng.standard_normal(512) + 1j * rng.standard_normal(512))
        vals *= np.exp(-x * x / 8)  # confine to the grid
        u = SampledSignal(0.05, vals)
        grid = stft_grid(u, WindowSpec(1.0))
        assert moyal_error(u, grid) <= 1e-6

    def test_inversion_round_trip(self):
        u = make_gaussian(1, 256, 0.1)
        w = WindowSpec(1.0)
        back = istft(stft_grid(u, w), w)
        err = np.sqrt(np.sum(np.abs(back.values - u.values) ** 2) * u.dx)
        assert err <= 1e-6

    def test_inversion_linearity_and_zero(self):
        u = make_gaussian(1, 256, 0.1)
        w = WindowSpec(1.0)
        g1 = stft_grid(u, w)
        zero = istft(type(g1)(g1.dx, g1.dxi, np.zeros_like(g1.values)), w)
        assert zero.norm() == pytest.approx(0.0, abs=1e-15)
        half1 = type(g1)(g1.dx, g1.dxi, 0.25 * g1.values)
        half2 = type(g1)(g1.dx, g1.dxi, 0.75 * g1.values)
        s = istft(half1, w).values + istft(half2, w).values
        np.testing.assert_allclose(s, istft(g1, w).values, atol=1e-10)

    def test_inversion_requires_unit_window(self):
        u = make_gaussian(1, 256, 0.1)
        grid = stft_grid(u, WindowSpec(1.0))
        with pytest.raises(DomainError):
            istft(grid, WindowSpec(1.0, unit_norm=False))


class TestSymmetries:
    def test_reflection_identity(self):
        # |V u (x, xi)| = |V u(-x, -xi)| for even real signals
        u = make_gaussian(1, 256, 0.1, width=1.7)
        grid = stft_grid(u, WindowSpec(1.0))
        mags = np.abs(grid.values)
        flipped = mags[1:, 1:][::-1, ::-1]
        np.testing.assert_allclose(mags[1:, 1:], flipped, atol=1e-8)

    def test_conjugation_identity(self):
        # |V conj(u)(x, xi)| = |V u(x, -xi)| for a real window
        from anisowf.signals import SampledSignal
        rng = np.random.default_rng(11)
        x = (np.arange(256) - 128) * 0.1
        vals = (rng.standard_normal(256) + 1j * rng.standard_normal(256)) * np.exp(-x * x / 6)
        u = SampledSignal(0.1, vals)
        ubar = SampledSignal(0.1, np.conj(vals))
        w = WindowSpec(1.0)
        m1 = np.abs(stft_grid(ubar, w).values)
        m2 = np.abs(stft_grid(u, w).values)[:, 1:][:, ::-1]
        np.testing.assert_allclose(m1[:, 1:], m2, atol=1e-8)


class TestSeminorms:
    def test_gaussian_finite(self):
        u = make_gaussian(1, 256, 0.1)
        val = stft_seminorm(u, WindowSpec(1.0), AnisoIndex(1.0, 1.0), 0.1)
        assert math.isfinite(val) and val > 0.0

    def test_zero_signal(self):
        from anisowf.signals import SampledSignal
        u = SampledSignal(0.1, np.zeros(256, dtype=complex))
        assert stft_seminorm(u, WindowSpec(1.0), AnisoIndex(1.0, 1.0), 1.0) == 0.0

    def test_chirp_divergent(self):
        u = make_chirp(poly_1d(0.0, 0.0, 1.0), 512, 0.05)
        val = stft_seminorm(u, WindowSpec(1.0), AnisoIndex(1.2, 1.2), 2.0)
        assert math.isinf(val)

    def test_window_equivalence_bounded_ratios(self):
        # dx = 0.2 keeps the weighted FFT noise floor below the true supremum at r = 2
        u = make_gaussian(1, 256, 0.2)
        idx = AnisoIndex(1.0, 1.0)
        for r in (0.5, 1.0, 2.0):
            v1 = stft_seminorm(u, WindowSpec(1.0), idx, r)
            v2 = stft_seminorm(u, WindowSpec(1.4), idx, r)
            assert math.isfinite(v1) and math.isfinite(v2)
            assert 1e-3 <= v1 / v2 <= 1e3

    def test_classical_order_zero(self):
        u = make_gaussian(1, 256, 0.1)
        val = classical_seminorm(u, AnisoIndex(1.0, 1.0), h=1e9, max_order=0)
        assert val == pytest.approx(math.pi ** -0.25, abs=1e-10)

    def test_classical_monotone_in_h(self):
        u = make_gaussian(1, 256, 0.1)
        idx = AnisoIndex(1.0, 1.0)
        v_small = classical_seminorm(u, idx, h=0.5, max_order=4)
        v_large = classical_seminorm(u, idx, h=1.0, max_order=4)
        assert v_small >= v_large

    def test_classical_max_order_cap(self):
        u = make_gaussian(1, 256, 0.1)
        with pytest.raises(DomainError):
            classical_seminorm(u, AnisoIndex(1.0, 1.0), 1.0, 9)

    def test_classical_nyquist_guard(self):
        # white noise has spectral mass at the Nyquist edge
        from anisowf.signals import SampledSignal
        rng = np.random.default_rng(13)
        u = SampledSignal(0.1, rng.standard_normal(256) * (1 + 0j))
        with pytest.raises(ResolutionError):
            classical_seminorm(u, AnisoIndex(1.0, 1.0), 1.0, 2)
