import itertools
import math
import unittest

import numpy as np

from freegig.distributions import FreeGigParams, MarchenkoPasturParams, \
    SingularityError, SupportDomainError, _fgig_weight, fgig_cauchy, \
    fgig_cdf, fgig_density, fgig_moment, fgig_rtransform, gamma_const, \
    invert_params, mp_cauchy, mp_density, mp_moment, mp_rtransform, \
    mp_cdf, mp_quadrature_moment, mp_support, sample_spectrum, \
    solve_support, support_residuals
from freegig.experiments import default_r_grid
from freegig.quadrature import integrate_edge
from freegig.rmt import EmpiricalSpectralDistribution, ks_distance
from helpers import MP_RATES, sweep_params


class TestParams(unittest.TestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            FreeGigParams(1, 0, 1)
        with self.assertRaises(ValueError):
            FreeGigParams(1, 1, -1)
        with self.assertRaises(TypeError):
            FreeGigParams('1', 1, 1)
        with self.assertRaises(ValueError):
            MarchenkoPasturParams(-1, 1)
        with self.assertRaises(ValueError):
            MarchenkoPasturParams(1, 0)

    def test_hashable(self):
        self.assertEqual(FreeGigParams(2, 1, 1), FreeGigParams(2.0, 1.0, 1.0))
        self.assertEqual(len({FreeGigParams(2, 1, 1),
                              FreeGigParams(2.0, 1, 1)}), 1)

    def test_invert_params(self):
        p = FreeGigParams(2, 3, 0.5)
        self.assertEqual(invert_params(p), FreeGigParams(-2, 0.5, 3))
        self.assertEqual(invert_params(invert_params(p)), p)


class TestSupport(unittest.TestCase):
    def test_closed_case(self):
        s = solve_support(FreeGigParams(0, 1, 1))
        self.assertAlmostEqual(s.a, 2 - math.sqrt(3), delta=1e-10)
        self.assertAlmostEqual(s.b, 2 + math.sqrt(3), delta=1e-10)

    def test_residuals_on_grid(self):
        scales = (0.5, 1.0, 2.0, 4.0, 8.0)
        for (lam, alpha, beta) in itertools.product((-3, -1, 0, 2, 4),
                                                    scales, scales):
            p = FreeGigParams(lam, alpha, beta)
            s = solve_support(p)
            self.assertTrue(0 < s.a < s.b, p)
            (r1, r2) = support_residuals(p, s.a, s.b)
            self.assertLess(abs(r1), 1e-10, p)
            self.assertLess(abs(r2), 1e-10, p)

    def test_continuation_to_marchenko_pastur(self):
        # beta -> 0 leaves the support of MP(rate 2, jump 1)
        s = solve_support(FreeGigParams(2, 1, 1e-6))
        self.assertAlmostEqual(s.a, (1 - math.sqrt(2)) ** 2, delta=1e-4)
        self.assertAlmostEqual(s.b, (1 + math.sqrt(2)) ** 2, delta=1e-4)

    def test_nearly_degenerate_parameters(self):
        # 1 + lambda + beta/sqrt(ab) cancels when alpha is tiny
        for (lam, beta) in ((-3, 0.5), (-2, 1.0), (-1.5, 2.0)):
            p = FreeGigParams(lam, 1e-6, beta)
            s = solve_support(p)
            (r1, r2) = support_residuals(p, s.a, s.b)
            self.assertLess(abs(r1), 1e-10, p)
            self.assertLess(abs(r2), 1e-10, p)


class TestFreeGigDensity(unittest.TestCase):
    def test_unit_mass(self):
        for p in sweep_params():
            self.assertAlmostEqual(fgig_moment(p, 0), 1.0, delta=1e-8)

    def test_vanishes_outside_support(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        values = fgig_density(p, s, [s.a / 2, s.a, s.b, 2 * s.b])
        np.testing.assert_array_equal(values, 0.0)
        inside = fgig_density(p, s, np.linspace(s.a, s.b, 12)[1:-1])
        self.assertTrue(np.all(inside > 0))

    def test_cdf(self):
        p = FreeGigParams(3, 2, 0.5)
        s = solve_support(p)
        self.assertEqual(float(fgig_cdf(p, s, s.a / 2)), 0.0)
        self.assertAlmostEqual(float(fgig_cdf(p, s, 2 * s.b)), 1.0,
                               places=14)
        x = np.linspace(s.a, s.b, 9)
        self.assertTrue(np.all(np.diff(fgig_cdf(p, s, x)) > 0))

    def test_inverse_moment_is_moment_of_inverse_law(self):
        for p in sweep_params():
            self.assertAlmostEqual(fgig_moment(p, -1),
                                   fgig_moment(invert_params(p), 1),
                                   delta=1e-10)

    def test_moment_order(self):
        p = FreeGigParams(2, 1, 1)
        with self.assertRaises(TypeError):
            fgig_moment(p, 1.5)
        with self.assertRaises(ValueError):
            fgig_moment(p, 33)


class TestFreeGigTransforms(unittest.TestCase):
    def test_cauchy_against_quadrature(self):
        for p in sweep_params():
            s = solve_support(p)
            weight = _fgig_weight(p, s)
            for z in (1 + 1j, 0.5 + 0.2j, -1 + 2j, 10 - 3j):
                re = integrate_edge(lambda x: (1 / (z - x)).real * weight(x),
                                    s.a, s.b)
                im = integrate_edge(lambda x: (1 / (z - x)).imag * weight(x),
                                    s.a, s.b)
                self.assertAlmostEqual(complex(fgig_cauchy(p, s, z)),
                                       complex(re, im), delta=1e-10)

    def test_cauchy_at_infinity(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        z = 1e6j
        self.assertAlmostEqual(complex(z * fgig_cauchy(p, s, z)), 1.0,
                               delta=1e-5)

    def test_cauchy_singular_points(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        with self.assertRaises(SingularityError):
            fgig_cauchy(p, s, (s.a + s.b) / 2)
        with self.assertRaises(SingularityError):
            fgig_cauchy(p, s, 0)

    def test_boundary_values_give_density(self):
        p = FreeGigParams(1.5, 1, 2)
        s = solve_support(p)
        x = np.linspace(s.a, s.b, 22)[1:-1]
        values = -np.imag(fgig_cauchy(p, s, x + 1e-12j)) / np.pi
        np.testing.assert_allclose(values, fgig_density(p, s, x), atol=1e-8)

    def test_rtransform_at_zero_is_mean(self):
        for p in sweep_params():
            s = solve_support(p)
            self.assertAlmostEqual(complex(fgig_rtransform(p, s, 0.0)),
                                   fgig_moment(p, 1), delta=1e-10)

    def test_gamma_is_minus_inverse_moment(self):
        for p in sweep_params():
            s = solve_support(p)
            self.assertAlmostEqual(gamma_const(p, s).value,
                                   -fgig_moment(p, -1), delta=1e-8)

    def test_cauchy_inverts_rtransform(self):
        z = default_r_grid()
        for p in sweep_params():
            s = solve_support(p)
            w = fgig_rtransform(p, s, z) + 1 / z
            np.testing.assert_allclose(fgig_cauchy(p, s, w), z, atol=1e-8)

    def test_rtransform_inverts_cauchy(self):
        z = np.array([20 + 5j, -20 + 5j, 30j, 25 - 10j])
        for p in sweep_params():
            s = solve_support(p)
            G = fgig_cauchy(p, s, z)
            np.testing.assert_allclose(fgig_rtransform(p, s, G) + 1 / G, z,
                                       atol=1e-8)


class TestSampleSpectrum(unittest.TestCase):
    def test_reproducible_and_in_support(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        x = sample_spectrum(p, 500, np.random.default_rng(3))
        y = sample_spectrum(p, 500, np.random.default_rng(3))
        np.testing.assert_array_equal(x, y)
        self.assertTrue(np.all((s.a <= x) & (x <= s.b)))

    def test_follows_the_law(self):
        p = FreeGigParams(-2, 1, 1)
        s = solve_support(p)
        x = sample_spectrum(p, 4000, np.random.default_rng(11))
        e = EmpiricalSpectralDistribution(x)
        self.assertLess(ks_distance(e, lambda t: fgig_cdf(p, s, t)), 0.05)

    def test_mean_of_many_draws(self):
        p = FreeGigParams(2, 1, 1)
        n = 10 ** 6
        x = sample_spectrum(p, n, np.random.default_rng(2020))
        mean = fgig_moment(p, 1)
        error = math.sqrt((fgig_moment(p, 2) - mean * mean) / n)
        self.assertLess(abs(np.mean(x) - mean), 3 * error)


class TestMarchenkoPastur(unittest.TestCase):
    def test_support_and_atom(self):
        p = MarchenkoPasturParams(2.0, 0.5)
        (a, b) = mp_support(p)
        self.assertAlmostEqual(a, 0.5 * (1 - math.sqrt(2)) ** 2, places=15)
        self.assertAlmostEqual(b, 0.5 * (1 + math.sqrt(2)) ** 2, places=15)
        self.assertEqual(p.atom, 0.0)
        self.assertEqual(MarchenkoPasturParams(0.5, 1.0).atom, 0.5)

    def test_continuous_mass(self):
        for rate in MP_RATES:
            p = MarchenkoPasturParams(rate, 1.0)
            (a, b) = mp_support(p)
            (_, atom) = mp_density(p, 1.0)
            mass = integrate_edge(lambda x: 1 / (2 * math.pi * x), a, b)
            self.assertAlmostEqual(mass + atom, 1.0, delta=1e-8)

    def test_cdf_with_atom(self):
        p = MarchenkoPasturParams(0.5, 1.0)
        (a, b) = mp_support(p)
        self.assertEqual(float(mp_cdf(p, -1.0)), 0.0)
        self.assertAlmostEqual(float(mp_cdf(p, 0.0)), 0.5, delta=1e-12)
        self.assertAlmostEqual(float(mp_cdf(p, b + 1)), 1.0, delta=1e-12)
        values = mp_cdf(p, np.linspace(a, b, 50))
        self.assertTrue(np.all(np.diff(values) >= 0))

    def test_moments(self):
        p = MarchenkoPasturParams(1.0, 1.0)
        self.assertEqual([mp_moment(p, k) for k in range(1, 6)],
                         [1, 2, 5, 14, 42])
        q = MarchenkoPasturParams(3.0, 0.5)
        self.assertAlmostEqual(mp_moment(q, -1), 1 / (0.5 * 2), delta=1e-10)
        with self.assertRaises(SupportDomainError):
            mp_moment(p, -1)

    def test_quadrature_moments(self):
        for rate in MP_RATES:
            p = MarchenkoPasturParams(rate, 1.0)
            self.assertAlmostEqual(mp_quadrature_moment(p, 0), 1.0,
                                   delta=1e-12)
            for k in (1, 2, 3):
                self.assertAlmostEqual(mp_quadrature_moment(p, k),
                                       mp_moment(p, k), delta=1e-10)
        with self.assertRaises(SupportDomainError):
            mp_quadrature_moment(MarchenkoPasturParams(1.0, 1.0), -1)

    def test_cauchy_against_quadrature(self):
        p = MarchenkoPasturParams(2.0, 1.0)
        (a, b) = mp_support(p)
        z = 1 + 1j
        re = integrate_edge(lambda x: (1 / (z - x)).real / (2 * math.pi * x),
                            a, b)
        im = integrate_edge(lambda x: (1 / (z - x)).imag / (2 * math.pi * x),
                            a, b)
        self.assertAlmostEqual(complex(mp_cauchy(p, z)), complex(re, im),
                               delta=1e-10)

    def test_cauchy_includes_atom(self):
        p = MarchenkoPasturParams(0.5, 1.0)
        (a, b) = mp_support(p)
        z = 2 + 1j
        re = integrate_edge(lambda x: (1 / (z - x)).real / (2 * math.pi * x),
                            a, b)
        im = integrate_edge(lambda x: (1 / (z - x)).imag / (2 * math.pi * x),
                            a, b)
        self.assertAlmostEqual(complex(mp_cauchy(p, z)),
                               complex(re, im) + p.atom / z, delta=1e-10)

    def test_rtransform(self):
        p = MarchenkoPasturParams(2.0, 0.5)
        self.assertAlmostEqual(complex(mp_rtransform(p, 0.0)), 1.0)
        self.assertAlmostEqual(complex(mp_rtransform(p, 1.0)), 2.0)
        with self.assertRaises(SingularityError):
            mp_rtransform(p, 2.0)


if __name__ == '__main__':
    unittest.main()
