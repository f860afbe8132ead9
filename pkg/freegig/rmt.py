"""Finite-N random matrices, spectra and freeness diagnostics.

The normalized trace phi_N = Tr(.)/N plays the role of the state.
"""
import concurrent.futures
import logging
import math

import numpy as np

from . import settings
from .distributions import sample_spectrum
from .utils import FreeGigException, derive_streams, make_rng

log = logging.getLogger(__name__)


class ParameterError(FreeGigException):
    pass


class ConditioningError(FreeGigException):
    pass


class RankDeficiencyError(FreeGigException):
    pass


class HermitianSample(object):
    """An N x N Hermitian matrix with its provenance.

    The entries are symmetrized on construction so that the matrix equals
    its conjugate transpose exactly.
    """

    def __init__(self, entries, ensemble='', seed=None):
        entries = np.asarray(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ParameterError('need a square matrix, got shape %r'
                                 % (entries.shape,))
        self.entries = (entries + entries.conj().T) / 2
        self.ensemble = ensemble
        self.seed = seed
        return

    @property
    def n(self):
        return self.entries.shape[0]

    def eigh(self):
        return np.linalg.eigh(self.entries)

    def __repr__(self):
        return '<HermitianSample %s n=%d>' % (self.ensemble, self.n)


def _matrix(m):
    if isinstance(m, HermitianSample):
        return m.entries
    return np.asarray(m)


class EmpiricalSpectralDistribution(object):

    def __init__(self, eigenvalues):
        self.eigenvalues = np.sort(np.asarray(eigenvalues, dtype=float))
        return

    def __len__(self):
        return len(self.eigenvalues)

    def cdf(self, x):
        return np.searchsorted(self.eigenvalues, x, side='right') \
            / len(self.eigenvalues)

    def __repr__(self):
        return '<EmpiricalSpectralDistribution n=%d [%g, %g]>' % (
            len(self), self.eigenvalues[0], self.eigenvalues[-1])


def sample_ginibre(rows, cols, rng):
    """Complex Gaussian matrix with unit-variance entries."""
    if rows < 1 or cols < 1:
        raise ParameterError('dimensions must be positive: %r x %r'
                             % (rows, cols))
    rng = make_rng(rng)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / math.sqrt(2)


def sample_haar_unitary(n, rng):
    """Haar unitary from the QR factorization of a Ginibre matrix.

    The factorization is made unique by giving R a positive diagonal,
    i.e. Q' = Q L with L = diag(phase(diag(R))).
    """
    rng = make_rng(rng)
    for attempt in range(2):
        (Q, R) = np.linalg.qr(sample_ginibre(n, n, rng))
        L = np.diagonal(R)
        if np.all(1e-12 < np.abs(L)):
            return Q * (L / np.abs(L))
        log.warning('rank-deficient Ginibre matrix, resampling')
    raise RankDeficiencyError('Ginibre matrix of size %d is singular twice'
                              % n)


def sample_wishart(n, dof, alpha_scale, rng, allow_singular=False):
    """Y = G G* / alpha_scale with G an n x dof Ginibre matrix.

    With allow_singular, dof below n gives a rank-deficient Y.
    """
    if dof < n and not allow_singular:
        raise ParameterError('dof %d below the dimension %d' % (dof, n))
    if not 0 < alpha_scale:
        raise ParameterError('alpha_scale must be positive: %r'
                             % alpha_scale)
    G = sample_ginibre(n, dof, rng)
    return HermitianSample(G @ G.conj().T / alpha_scale, ensemble='wishart')


def sample_fgig_matrix(n, p, rng):
    """U diag(spectrum) U* with a free GIG spectrum and Haar U."""
    rng = make_rng(rng)
    spectrum = sample_spectrum(p, n, rng)
    U = sample_haar_unitary(n, rng)
    return HermitianSample((U * spectrum) @ U.conj().T, ensemble='fgig')


def _inverse(m, what):
    (w, v) = np.linalg.eigh(m)
    if not 0 < w[0] or settings.CONDITION_LIMIT < w[-1] / w[0]:
        raise ConditioningError('%s is numerically singular '
                                '(eigenvalues %g..%g)' % (what, w[0], w[-1]))
    return (v / w) @ v.conj().T


def my_transform(X, Y):
    """U = (X+Y)^-1 and V = X^-1 - (X+Y)^-1."""
    X = _matrix(X)
    Y = _matrix(Y)
    if X.shape != Y.shape:
        raise ParameterError('shape mismatch %r vs %r' % (X.shape, Y.shape))
    U = _inverse(X + Y, 'X+Y')
    V = _inverse(X, 'X') - U
    return (HermitianSample(U, ensemble='my-U'),
            HermitianSample(V, ensemble='my-V'))


def hua_residual(X, Y):
    """Operator norm of (X + X Y^-1 X)(X^-1 - (X+Y)^-1) - I."""
    X = _matrix(X)
    Y = _matrix(Y)
    Xinv = _inverse(X, 'X')
    left = X + X @ _inverse(Y, 'Y') @ X
    right = Xinv - _inverse(X + Y, 'X+Y')
    return float(np.linalg.norm(left @ right - np.eye(len(X)), ord=2))


def trace_moment(word):
    """Tr(M1 M2 ... Mk)/N for the matrices of the word, real part."""
    matrices = [_matrix(m) for m in word]
    if not matrices:
        raise ParameterError('empty word')
    n = matrices[0].shape[0]
    for m in matrices:
        if m.shape != (n, n):
            raise ParameterError('dimension mismatch in word: %r'
                                 % [x.shape for x in matrices])
    if len(matrices) == 1:
        return float(np.trace(matrices[0]).real / n)
    head = matrices[0]
    for m in matrices[1:-1]:
        head = head @ m
    return float(np.sum(head * matrices[-1].T).real / n)


def mixed_trace_moments(X, Y):
    """Matrix estimates of phi(V), phi(V^-1) and phi(X Y^-1) for the pair
    built from X and Y; V^-1 = X + X Y^-1 X."""
    X = _matrix(X)
    Y = _matrix(Y)
    Yinv = _inverse(Y, 'Y')
    V = _inverse(X, 'X') - _inverse(X + Y, 'X+Y')
    return {
        'V': trace_moment([V]),
        'V_inv': trace_moment([X + X @ Yinv @ X]),
        'X_Yinv': trace_moment([X, Yinv]),
    }


class FreenessReport(object):

    def __init__(self, kappa2_values, alt4_values, n):
        if len(kappa2_values) < 1:
            raise ParameterError('a report needs at least one replicate')
        self.kappa2_values = np.asarray(kappa2_values, dtype=float)
        self.alt4_values = np.asarray(alt4_values, dtype=float)
        self.n = n
        return

    @property
    def reps(self):
        return len(self.kappa2_values)

    @property
    def mixed_cumulant_2(self):
        return float(np.mean(self.kappa2_values))

    @property
    def alternating_moment_4(self):
        return float(np.mean(self.alt4_values))

    def _stderr(self, values):
        if len(values) < 2:
            return float('nan')
        return float(np.std(values, ddof=1) / math.sqrt(len(values)))

    @property
    def mixed_cumulant_2_stderr(self):
        return self._stderr(self.kappa2_values)

    @property
    def alternating_moment_4_stderr(self):
        return self._stderr(self.alt4_values)

    def __repr__(self):
        return '<FreenessReport n=%d reps=%d kappa2=%.3g alt4=%.3g>' % (
            self.n, self.reps, self.mixed_cumulant_2,
            self.alternating_moment_4)


def pair_statistics(U, V):
    """(phi(UV) - phi(U)phi(V), phi(U0 V0 U0 V0)) with centered U0, V0."""
    U = _matrix(U)
    V = _matrix(V)
    if U.shape != V.shape:
        raise ParameterError('shape mismatch %r vs %r' % (U.shape, V.shape))
    n = len(U)
    mu = trace_moment([U])
    mv = trace_moment([V])
    kappa2 = trace_moment([U, V]) - mu * mv
    U0 = U - mu * np.eye(n)
    V0 = V - mv * np.eye(n)
    W = U0 @ V0
    alt4 = trace_moment([W, W])
    return (kappa2, alt4)


def freeness_statistics(U, V=None, reps=1, rng=None, workers=1):
    """Freeness diagnostics averaged over replicates.

    U and V are either sequences of per-replicate matrices or callables
    drawing one matrix from a numpy Generator.  With V omitted, U must be
    a callable returning the pair (U, V).
    """
    if reps < 1:
        raise ParameterError('reps must be positive: %r' % reps)

    def draw(i, stream):
        if V is None:
            return U(stream)
        if callable(U):
            return (U(stream), V(stream))
        return (U[i], V[i])

    streams = derive_streams(rng, reps) if callable(U) else [None] * reps

    def job(i):
        (u, v) = draw(i, streams[i])
        return pair_statistics(u, v) + (len(_matrix(u)),)

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        stats = list(pool.map(job, range(reps)))
    report = FreenessReport([s[0] for s in stats], [s[1] for s in stats],
                            stats[0][2])
    log.info('freeness statistics: %r', report)
    return report


def esd(M):
    """Sorted eigenvalues of a Hermitian matrix."""
    return EmpiricalSpectralDistribution(np.linalg.eigvalsh(_matrix(M)))


def ks_distance(e, cdf):
    """Kolmogorov-Smirnov distance sup |F_emp - cdf| for an ESD."""
    x = e.eigenvalues
    n = len(x)
    F = np.asarray(cdf(x), dtype=float)
    upper = np.searchsorted(x, x, side='right') / n
    lower = np.searchsorted(x, x, side='left') / n
    return float(max(np.max(np.abs(upper - F)), np.max(np.abs(F - lower))))
