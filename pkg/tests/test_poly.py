import numpy as np
import pytest

from anisowf.errors import DomainError
from anisowf.poly import (PolynomialData, eval_grad, eval_poly,
                          iter_multi_indices, poly_1d, principal_part)


def random_poly(rng, dim, degree):
    coeffs = {}
    for alpha in iter_multi_indices(dim, degree):
        if rng.uniform() < 0.5:
            coeffs[alpha] = rng.standard_normal()
    coeffs[tuple([degree] + [0] * (dim - 1))] = rng.standard_normal() + 2.0
    return PolynomialData(dim, coeffs)


class TestEval:
    def test_square(self):
        p = poly_1d(0.0, 0.0, 1.0)
        assert eval_poly(p, 3.0) == pytest.approx(9.0)
        assert eval_grad(p, 3.0)[0] == pytest.approx(6.0)

    def test_cube(self):
        p = poly_1d(0.0, 0.0, 0.0, 1.0)
        assert eval_poly(p, 2.0) == pytest.approx(8.0)
        assert eval_grad(p, 2.0)[0] == pytest.approx(12.0)

    def test_cross_term(self):
        p = PolynomialData(2, {(1, 1): 1.0})
        assert eval_poly(p, [2.0, 5.0]) == pytest.approx(10.0)
        np.testing.assert_allclose(eval_grad(p, [2.0, 5.0]), [5.0, 2.0])

    def test_vectorized_eval(self):
        p = poly_1d(1.0, -2.0, 0.5)
        xs = np.linspace(-2, 2, 7)
        vals = eval_poly(p, xs)
        expect = 1.0 - 2.0 * xs + 0.5 * xs ** 2
        np.testing.assert_allclose(vals, expect)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(2)
        step = 1e-5
        for dim in (1, 2, 3):
            for degree in (2, 4, 6):
                p = random_poly(rng, dim, degree)
                for _ in range(5):
                    x = rng.uniform(-1.5, 1.5, size=dim)
                    g = eval_grad(p, x)
                    for j in range(dim):
                        e = np.zeros(dim)
                        e[j] = step
                        fd = (eval_poly(p, x + e) - eval_poly(p, x - e)) / (2 * step)
                        assert g[j] == pytest.approx(fd, rel=1e-6, abs=1e-6)


class TestPrincipalPart:
    def test_drops_lower_order(self):
        p = poly_1d(1.0, 3.0, 1.0)  # 1 + 3x + x^2
        top = principal_part(p)
        assert top.coeffs == {(2,): 1.0}

    def test_cubic(self):
        p = poly_1d(0.0, -1.0, 0.0, 1.0)  # x^3 - x
        assert principal_part(p).coeffs == {(3,): 1.0}

    def test_homogeneous_fixed_point(self):
        p = PolynomialData(2, {(2, 1): 4.0, (0, 3): -1.0})
        assert principal_part(p).coeffs == p.coeffs


class TestStructure:
    def test_parity(self):
        assert poly_1d(0.0, 0.0, 2.0).is_even()
        assert poly_1d(0.0, 1.0, 0.0, 3.0).is_odd()
        assert not poly_1d(1.0, 1.0).is_even()
        assert not poly_1d(1.0, 1.0).is_odd()

    def test_degree_ignores_zero_coeffs(self):
        p = PolynomialData(1, {(5,): 0.0, (2,): 1.0})
        assert p.degree == 2

    def test_homogeneity(self):
        assert PolynomialData(2, {(1, 1): 1.0, (2, 0): -2.0}).is_homogeneous()
        assert not PolynomialData(2, {(1, 1): 1.0, (1, 0): 1.0}).is_homogeneous()

    def test_bad_multi_index(self):
        with pytest.raises(DomainError):
            PolynomialData(2, {(1,): 1.0})
