import unittest

import numpy as np

from freegig.distributions import FreeGigParams, solve_support
from freegig.rmt import ConditioningError, EmpiricalSpectralDistribution, \
    HermitianSample, ParameterError, esd, freeness_statistics, \
    hua_residual, ks_distance, mixed_trace_moments, my_transform, \
    pair_statistics, sample_fgig_matrix, sample_ginibre, \
    sample_haar_unitary, sample_wishart, trace_moment


def positive_definite(n, rng):
    W = sample_wishart(n, 2 * n, 2 * n, rng)
    return HermitianSample(W.entries + 0.5 * np.eye(n))


class TestSamplers(unittest.TestCase):
    def test_ginibre(self):
        G = sample_ginibre(200, 100, np.random.default_rng(0))
        self.assertEqual(G.shape, (200, 100))
        self.assertAlmostEqual(np.mean(np.abs(G) ** 2), 1.0, delta=0.03)
        with self.assertRaises(ParameterError):
            sample_ginibre(0, 3, np.random.default_rng(0))

    def test_haar_unitary(self):
        U = sample_haar_unitary(32, np.random.default_rng(0))
        np.testing.assert_allclose(U @ U.conj().T, np.eye(32), atol=1e-12)

    def test_haar_unitary_reproducible(self):
        U = sample_haar_unitary(8, np.random.default_rng(5))
        V = sample_haar_unitary(8, np.random.default_rng(5))
        np.testing.assert_array_equal(U, V)

    def test_wishart(self):
        Y = sample_wishart(16, 32, 16, np.random.default_rng(1))
        self.assertEqual(Y.n, 16)
        np.testing.assert_array_equal(Y.entries, Y.entries.conj().T)
        self.assertTrue(np.all(np.linalg.eigvalsh(Y.entries) > 0))

    def test_wishart_rank(self):
        with self.assertRaises(ParameterError):
            sample_wishart(16, 8, 16, np.random.default_rng(1))
        Y = sample_wishart(16, 8, 16, np.random.default_rng(1),
                           allow_singular=True)
        self.assertEqual(np.linalg.matrix_rank(Y.entries), 8)

    def test_fgig_matrix_spectrum(self):
        p = FreeGigParams(2, 1, 1)
        s = solve_support(p)
        X = sample_fgig_matrix(24, p, np.random.default_rng(2))
        e = esd(X).eigenvalues
        self.assertTrue(np.all((s.a - 1e-9 <= e) & (e <= s.b + 1e-9)))

    def test_square_only(self):
        with self.assertRaises(ParameterError):
            HermitianSample(np.zeros((2, 3)))


class TestMatsumotoYorMaps(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(4)
        self.X = positive_definite(12, rng)
        self.Y = positive_definite(12, rng)

    def test_transform(self):
        (U, V) = my_transform(self.X, self.Y)
        Xinv = np.linalg.inv(self.X.entries)
        np.testing.assert_allclose(U.entries + V.entries, Xinv, atol=1e-10)
        np.testing.assert_allclose(
            U.entries @ (self.X.entries + self.Y.entries), np.eye(12),
            atol=1e-10)

    def test_hua_identity(self):
        self.assertLess(hua_residual(self.X, self.Y), 1e-10)

    def test_mixed_trace_moments(self):
        m = mixed_trace_moments(self.X, self.Y)
        (_, V) = my_transform(self.X, self.Y)
        self.assertAlmostEqual(m['V'], trace_moment([V]), places=10)
        self.assertAlmostEqual(
            m['V_inv'], trace_moment([np.linalg.inv(V.entries)]), places=8)

    def test_singular_input(self):
        Z = np.zeros((12, 12))
        with self.assertRaises(ConditioningError):
            my_transform(Z, self.Y)

    def test_shape_mismatch(self):
        with self.assertRaises(ParameterError):
            my_transform(np.eye(3), np.eye(4))


class TestStatistics(unittest.TestCase):
    def test_trace_moment(self):
        A = np.diag([1.0, 2.0, 3.0])
        self.assertAlmostEqual(trace_moment([A]), 2.0)
        self.assertAlmostEqual(trace_moment([A, A]), 14 / 3)
        self.assertAlmostEqual(trace_moment([A, A, A]), 12.0)
        with self.assertRaises(ParameterError):
            trace_moment([])

    def test_identity_is_free_from_everything(self):
        U = positive_definite(10, np.random.default_rng(8))
        (kappa2, alt4) = pair_statistics(U, np.eye(10))
        self.assertAlmostEqual(kappa2, 0.0, places=12)
        self.assertAlmostEqual(alt4, 0.0, places=12)

    def test_independent_rotations_are_nearly_free(self):
        def draw(rng):
            A = np.diag(np.linspace(1, 2, 64))
            B = np.diag(np.linspace(-1, 1, 64))
            Q = sample_haar_unitary(64, rng)
            return (A, Q @ B @ Q.conj().T)

        report = freeness_statistics(draw, reps=6, rng=3)
        self.assertEqual(report.reps, 6)
        self.assertEqual(report.n, 64)
        self.assertLess(abs(report.mixed_cumulant_2), 0.02)
        self.assertLess(abs(report.alternating_moment_4), 0.02)

    def test_worker_count_does_not_change_results(self):
        def draw(rng):
            return sample_wishart(8, 16, 8, rng)

        one = freeness_statistics(draw, draw, reps=5, rng=9, workers=1)
        many = freeness_statistics(draw, draw, reps=5, rng=9, workers=3)
        np.testing.assert_array_equal(one.kappa2_values, many.kappa2_values)
        np.testing.assert_array_equal(one.alt4_values, many.alt4_values)

    def test_sequences_of_matrices(self):
        Us = [np.eye(4), 2 * np.eye(4)]
        Vs = [np.diag([1.0, 2, 3, 4])] * 2
        report = freeness_statistics(Us, Vs, reps=2)
        np.testing.assert_allclose(report.kappa2_values, 0.0, atol=1e-14)
        self.assertTrue(np.isfinite(report.mixed_cumulant_2_stderr))

    def test_ks_distance(self):
        e = EmpiricalSpectralDistribution([4.0, 1.0, 3.0, 2.0])
        self.assertAlmostEqual(ks_distance(e, lambda x: x / 4), 0.25)
        np.testing.assert_array_equal(e.cdf([0.5, 2.0, 9.0]),
                                      [0.0, 0.5, 1.0])


if __name__ == '__main__':
    unittest.main()
