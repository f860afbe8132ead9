import unittest

import numpy as np

from freegig.distributions import FreeGigParams, MarchenkoPasturParams, \
    fgig_cauchy, fgig_cauchy_function, fgig_density, \
    fgig_rtransform_function, mp_cauchy, mp_cauchy_function, mp_density, \
    mp_rtransform_function, mp_support, solve_support
from freegig.transforms import AnalyticFunction, DegenerateSeriesError, \
    DomainError, TruncatedSeries, cauchy_from_r, free_convolve_r, \
    moment_series_from_r, quadratic_A_solver, quadratic_residual, \
    series_compose_AC, stieltjes_invert, taylor_coefficients


def geometric(z):
    return 1 / (1 - z / 2)


class TestAnalyticFunction(unittest.TestCase):
    def test_validation(self):
        with self.assertRaises(TypeError):
            AnalyticFunction(3)
        with self.assertRaises(ValueError):
            AnalyticFunction(geometric, domain='strip')
        with self.assertRaises(ValueError):
            AnalyticFunction(geometric, radius=0)

    def test_contains(self):
        f = AnalyticFunction(geometric, radius=2)
        self.assertTrue(f.contains(1j))
        self.assertFalse(f.contains(3))
        G = mp_cauchy_function(MarchenkoPasturParams(2, 1))
        self.assertTrue(G.contains(1j))
        self.assertFalse(G.contains(-1j))

    def test_convolution_radius(self):
        r1 = AnalyticFunction(geometric, radius=2)
        r2 = mp_rtransform_function(MarchenkoPasturParams(2, 2))
        h = free_convolve_r(r1, r2)
        self.assertEqual(h.radius, 0.5)
        self.assertAlmostEqual(complex(h(0.1)), geometric(0.1) + 4 / 0.8)
        with self.assertRaises(DomainError):
            free_convolve_r(r1, mp_cauchy_function(
                MarchenkoPasturParams(2, 1)))


class TestStieltjesInversion(unittest.TestCase):
    def test_marchenko_pastur_density(self):
        p = MarchenkoPasturParams(2.0, 1.0)
        (a, b) = mp_support(p)
        grid = np.linspace(a, b, 42)[1:-1]
        estimate = stieltjes_invert(mp_cauchy_function(p), grid)
        (exact, _) = mp_density(p, grid)
        middle = slice(5, -5)
        np.testing.assert_allclose(estimate.values[middle], exact[middle],
                                   atol=1e-5)
        self.assertEqual(estimate.epsilon_used, 1e-5)

    def test_free_gig_density(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        margin = 0.1 * (s.b - s.a)
        grid = np.linspace(s.a + margin, s.b - margin, 40)
        estimate = stieltjes_invert(fgig_cauchy_function(p), grid)
        np.testing.assert_allclose(estimate.values,
                                   fgig_density(p, s, grid), atol=1e-5)

    def test_mass(self):
        p = MarchenkoPasturParams(2.0, 1.0)
        (a, b) = mp_support(p)
        estimate = stieltjes_invert(mp_cauchy_function(p),
                                    np.linspace(a, b, 2001))
        self.assertAlmostEqual(estimate.mass(), 1.0, delta=1e-3)


class TestCauchyFromR(unittest.TestCase):
    def test_marchenko_pastur(self):
        for (rate, jump) in ((2.0, 1.0), (0.5, 1.0), (3.0, 0.5)):
            p = MarchenkoPasturParams(rate, jump)
            r = mp_rtransform_function(p)
            z = np.array([1 + 1j, 0.5 + 0.2j, 5 + 0.5j, -2 + 0.1j, 10j])
            np.testing.assert_allclose(cauchy_from_r(r, z), mp_cauchy(p, z),
                                       atol=1e-10)

    def test_free_gig(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        z = np.array([x + 1j * y for x in (1, 2, 3, 4.5, 6)
                      for y in (0.5, 2)])
        exact = fgig_cauchy(p, s, z)
        np.testing.assert_allclose(
            cauchy_from_r(fgig_rtransform_function(p), z), exact, atol=1e-8)
        # fGIG(-2, 1, 1) + MP(rate 2, jump 1) is fGIG(2, 1, 1)
        H = free_convolve_r(
            fgig_rtransform_function(FreeGigParams(-2, 1, 1)),
            mp_rtransform_function(MarchenkoPasturParams(2.0, 1.0)))
        np.testing.assert_allclose(cauchy_from_r(H, z), exact, atol=1e-8)

    def test_lower_half_plane(self):
        r = mp_rtransform_function(MarchenkoPasturParams(2.0, 1.0))
        with self.assertRaises(DomainError):
            cauchy_from_r(r, 1 - 1j)


class TestSeries(unittest.TestCase):
    def test_taylor_coefficients(self):
        f = AnalyticFunction(geometric, radius=2)
        c = taylor_coefficients(f, 10)
        np.testing.assert_allclose(c.coefficients, 0.5 ** np.arange(11),
                                   atol=1e-13)

    def test_infinite_radius_needs_explicit_radius(self):
        f = AnalyticFunction(np.exp)
        with self.assertRaises(DomainError):
            taylor_coefficients(f, 4)
        c = taylor_coefficients(f, 4, radius=1.0)
        np.testing.assert_allclose(c.coefficients,
                                   [1, 1, 1 / 2, 1 / 6, 1 / 24], atol=1e-14)

    def test_moment_series_from_r(self):
        r = TruncatedSeries([1.0] * 5)
        A = moment_series_from_r(r, 5)
        np.testing.assert_array_equal(A.coefficients, [1, 1, 2, 5, 14, 42])

    def test_compose_with_unit_c(self):
        A = TruncatedSeries([1, 2, 3, 4])
        C = TruncatedSeries([1, 0, 0, 0])
        np.testing.assert_array_equal(series_compose_AC(A, C, 3).coefficients,
                                      A.coefficients)

    def test_compose_linear_c(self):
        # C(w) = 1 + w gives A(z) + z A(z)^2
        A = TruncatedSeries([1, 1, 0, 0])
        C = TruncatedSeries([1, 1, 0, 0])
        np.testing.assert_array_equal(series_compose_AC(A, C, 3).coefficients,
                                      [1, 2, 2, 1])

    def test_truncated_series_rejects_nan(self):
        with self.assertRaises(ValueError):
            TruncatedSeries([1, float('nan')])


class TestQuadraticA(unittest.TestCase):
    def test_solution_satisfies_equation(self):
        A = quadratic_A_solver(3.0, 0.5, 2.0, 0.7, 12)
        self.assertEqual(A[0], 1.0)
        residual = quadratic_residual(A, 3.0, 0.5, 2.0, 0.7)
        self.assertLess(np.max(np.abs(residual)), 1e-12)

    def test_first_coefficient(self):
        # order z: (cd-1) + 1 + d alpha_m1 - delta0 a1 = 0
        A = quadratic_A_solver(3.0, 0.5, 2.0, 0.7, 1)
        self.assertAlmostEqual(A[1], (2.0 + 1 + 0.5 * 0.7) / 2.0)

    def test_domain(self):
        with self.assertRaises(DegenerateSeriesError):
            quadratic_A_solver(3.0, 0.5, 0.0, 0.7, 4)
        with self.assertRaises(DomainError):
            quadratic_A_solver(3.0, 0.5, -1.0, 0.7, 4)
        with self.assertRaises(DomainError):
            quadratic_A_solver(1.0, 0.5, 2.0, 0.7, 4)


if __name__ == '__main__':
    unittest.main()
