"""Verification runs for the free GIG / Marchenko-Pastur identities.

Each run returns an ExperimentReport holding named residuals with their
tolerances, plus tables for the artifact writer.
"""
import concurrent.futures
import logging
import math
import time

import numpy as np

from . import settings
from .combinatorics import CumulantSequence
from .combinatorics import MomentSequence
from .combinatorics import bls_expand
from .combinatorics import cumulants_from_moments
from .combinatorics import mixed_inverse_cumulants
from .distributions import FreeGigParams
from .distributions import MarchenkoPasturParams
from .distributions import fgig_cauchy
from .distributions import fgig_cdf
from .distributions import fgig_density
from .distributions import fgig_moment
from .distributions import fgig_rtransform_function
from .distributions import gamma_const
from .distributions import invert_params
from .distributions import mp_cdf
from .distributions import mp_density
from .distributions import mp_moment
from .distributions import mp_rtransform_function
from .distributions import mp_support
from .distributions import solve_support
from .rmt import ConditioningError
from .rmt import ParameterError
from .rmt import esd
from .rmt import hua_residual
from .rmt import ks_distance
from .rmt import mixed_trace_moments
from .rmt import my_transform
from .rmt import pair_statistics
from .rmt import sample_fgig_matrix
from .rmt import sample_wishart
from .transforms import TruncatedSeries
from .transforms import cauchy_from_r
from .transforms import cauchy_function
from .transforms import free_convolve_r
from .transforms import quadratic_A_solver
from .transforms import quadratic_residual
from .transforms import series_compose_AC
from .transforms import stieltjes_invert
from .utils import FreeGigException, derive_streams

log = logging.getLogger(__name__)


class CharacterizationDomainError(FreeGigException):
    pass


class RegressionConstants(object):
    """Constants of the regressions phi(V|U) = c and phi(V^-1|U) = d,
    with delta0 = phi(Y^-1) and alpha_m1 = phi((X+Y)^-1)."""

    def __init__(self, c, d, delta0, alpha_m1):
        self.c = c
        self.d = d
        self.delta0 = delta0
        self.alpha_m1 = alpha_m1
        self._validate()
        return

    def _validate(self):
        if not 1 < self.c * self.d:
            raise CharacterizationDomainError('cd must exceed 1: %r'
                                              % (self.c * self.d))
        if not 0 < self.delta0:
            raise CharacterizationDomainError('delta0 must be positive: %r'
                                              % self.delta0)
        if not 0 < self.alpha_m1:
            raise CharacterizationDomainError('alpha_m1 must be positive: %r'
                                              % self.alpha_m1)
        return

    def __repr__(self):
        return '<RegressionConstants c=%g d=%g delta0=%g alpha_m1=%g>' % (
            self.c, self.d, self.delta0, self.alpha_m1)


class RegressionSeries(object):
    """alpha_n = phi((X+Y)^n), beta_n = phi(X^-1 (X+Y)^n) and
    delta_n = phi(Y^-1 (X+Y)^n)."""

    def __init__(self, alpha, beta, delta=None):
        self.alpha = np.asarray(alpha, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        self.delta = None if delta is None else np.asarray(delta,
                                                           dtype=float)
        assert abs(self.alpha[0] - 1) < 1e-12, self.alpha[0]
        return


class Residual(object):
    """A checked quantity: |value| <= tolerance ('abs') or
    value < tolerance ('below')."""

    def __init__(self, name, value, tolerance, kind='abs'):
        assert kind in ('abs', 'below'), kind
        self.name = name
        self.value = float(value)
        self.tolerance = tolerance
        self.kind = kind
        return

    @property
    def passed(self):
        if not math.isfinite(self.value):
            return False
        if self.kind == 'below':
            return self.value < self.tolerance
        return abs(self.value) <= self.tolerance

    def __repr__(self):
        return '<Residual %s=%.3g tol=%g %s>' % (
            self.name, self.value, self.tolerance,
            'pass' if self.passed else 'FAIL')


class ExperimentReport(object):

    def __init__(self, experiment, parameters, seed=None, exploratory=False):
        self.experiment = experiment
        self.parameters = dict(parameters)
        self.seed = seed
        self.exploratory = exploratory
        self.residuals = []
        self.tables = {}
        self.notes = []
        self.started = time.perf_counter()
        self.wall_clock = None
        return

    def add(self, name, value, tolerance, kind='abs'):
        residual = Residual(name, value, tolerance, kind)
        self.residuals.append(residual)
        log.debug('%s: %r', self.experiment, residual)
        return residual

    def add_table(self, name, header, rows):
        self.tables[name] = (tuple(header), [tuple(r) for r in rows])
        return

    def note(self, text):
        self.notes.append(text)
        return

    def finish(self):
        self.wall_clock = time.perf_counter() - self.started
        log.info('%s finished in %.2fs: passed=%r', self.experiment,
                 self.wall_clock, self.passed)
        return self

    @property
    def passed(self):
        if self.exploratory:
            return None
        return all(r.passed for r in self.residuals)

    def to_dict(self):
        return {
            'experiment': self.experiment,
            'parameters': self.parameters,
            'seed': self.seed,
            'exploratory': self.exploratory,
            'passed': self.passed,
            'wall_clock': self.wall_clock,
            'notes': list(self.notes),
            'residuals': [{'name': r.name, 'value': r.value,
                           'tolerance': r.tolerance, 'kind': r.kind,
                           'passed': r.passed} for r in self.residuals],
        }

    def __repr__(self):
        return '<ExperimentReport %s passed=%r residuals=%d>' % (
            self.experiment, self.passed, len(self.residuals))


def _fgig_parameters(p):
    return {'lambda': p.lam, 'alpha': p.alpha, 'beta': p.beta}


def _require_lambda(p, exploratory=False):
    if not 1 < p.lam and not (exploratory and 0 < p.lam):
        raise CharacterizationDomainError('this check needs lambda > 1: %r'
                                          % p)
    return


def _relative(value, *scale):
    return value / max([1.0] + [abs(x) for x in scale])


def characterization_params(c, d, delta0):
    """(lambda, alpha, beta) = (cd, delta0, d)/(cd-1)."""
    if not 0 < d:
        raise CharacterizationDomainError('d must be positive: %r' % d)
    if not 0 < delta0:
        raise CharacterizationDomainError('delta0 must be positive: %r'
                                          % delta0)
    cd = c * d
    if not 1 < cd:
        raise CharacterizationDomainError('cd must exceed 1: %r' % cd)
    return FreeGigParams(cd / (cd - 1), delta0 / (cd - 1), d / (cd - 1))


def regression_constants(p):
    """c = lambda/beta, d = beta/(lambda-1), delta0 = alpha/(lambda-1),
    alpha_m1 = -gamma."""
    _require_lambda(p)
    s = solve_support(p)
    return RegressionConstants(p.lam / p.beta, p.beta / (p.lam - 1),
                               p.alpha / (p.lam - 1),
                               -gamma_const(p, s).value)


def default_r_grid(radius=0.05, points=16):
    """Two rings inside |z| <= radius."""
    theta = 2 * np.pi * np.arange(points) / points
    return np.concatenate([radius * np.exp(1j * theta),
                           radius / 2 * np.exp(1j * (theta + np.pi / points))])


def support_grid(a, b, points=200):
    """points interior nodes of [a, b], endpoints excluded."""
    return np.linspace(a, b, points + 2)[1:-1]


def run_convolution_check(p, grid=None, points=200):
    """fGIG(-lambda, alpha, beta) + MP(rate lambda, jump 1/alpha) is
    fGIG(lambda, alpha, beta): compared on the r-transforms and on the
    density recovered from the summed r-transform."""
    _require_lambda(p)
    report = ExperimentReport('convolution', _fgig_parameters(p))
    if grid is None:
        grid = default_r_grid()
    grid = np.atleast_1d(np.asarray(grid, dtype=complex))
    q = FreeGigParams(-p.lam, p.alpha, p.beta)
    mp = MarchenkoPasturParams(p.lam, 1 / p.alpha)
    H = free_convolve_r(fgig_rtransform_function(q),
                        mp_rtransform_function(mp))
    r = fgig_rtransform_function(p)
    report.add('r_identity', np.max(np.abs(H(grid) - r(grid))), 1e-8)

    s = solve_support(p)
    xs = support_grid(s.a, s.b, points)
    G = cauchy_function(lambda z: cauchy_from_r(H, z), name='G[sum]')
    estimate = stieltjes_invert(G, xs)
    exact = fgig_density(p, s, xs)
    report.add('density_route', np.max(np.abs(estimate.values - exact)),
               1e-4)
    report.add_table('density', ('x', 'estimate', 'density'),
                     zip(xs, estimate.values, exact))
    return report.finish()


def run_inverse_check(p, grid=None, points=200):
    """The law of X^-1 is fGIG(-lambda, beta, alpha): density_p(1/y)/y^2
    against density_q(y)."""
    report = ExperimentReport('inverse', _fgig_parameters(p))
    q = invert_params(p)
    sp = solve_support(p)
    sq = solve_support(q)
    if grid is None:
        grid = support_grid(sq.a, sq.b, points)
    ys = np.asarray(grid, dtype=float)
    if np.any(ys <= 0):
        raise ValueError('the inversion grid must be positive')
    lhs = fgig_density(p, sp, 1 / ys) / (ys * ys)
    rhs = fgig_density(q, sq, ys)
    report.add('inverse_density', np.max(np.abs(lhs - rhs)), 1e-8)
    report.add_table('density', ('y', 'pushforward', 'density'),
                     zip(ys, lhs, rhs))
    return report.finish()


def _moment_series(p, order):
    """1, m_1, ..., m_order; m_0 is exact rather than a quadrature mass."""
    return np.array([1.0] + [fgig_moment(p, k) for k in range(1, order + 1)])


def _mixed_series(c1, moments, order):
    """C_1..C_(order+1) of a variable from phi(V^-1) and its moments."""
    m = MomentSequence(moments[1:order + 1])
    r = cumulants_from_moments(m, order)
    return mixed_inverse_cumulants(c1, r, order + 1)


def run_regression_check(p, order=8, quadratic_order=10, exploratory=False):
    """Moment identities behind the regressions phi(V|U) = c and
    phi(V^-1|U) = d, with X ~ fGIG(-lambda, alpha, beta) free from
    Y ~ MP(rate lambda, jump 1/alpha)."""
    _require_lambda(p, exploratory)
    report = ExperimentReport('regression', _fgig_parameters(p),
                              exploratory=not 1 < p.lam)
    (lam, alpha, beta) = p.astuple()
    c = lam / beta
    s = solve_support(p)
    gamma = gamma_const(p, s).value
    length = max(order, quadratic_order)
    moments = _moment_series(p, length)
    alpha_m1 = fgig_moment(p, -1)
    A = TruncatedSeries(moments[:order + 1])

    q = FreeGigParams(-lam, alpha, beta)
    CX = _mixed_series(fgig_moment(q, -1),
                       _moment_series(q, order), order)
    B = series_compose_AC(A, TruncatedSeries(CX.values), order)
    m = MomentSequence(moments[1:order + 1])
    for n in range(order + 1):
        previous = alpha_m1 if n == 0 else moments[n - 1]
        report.add('s1_beta_%d' % n,
                   _relative(B[n] - previous - c * moments[n],
                             B[n], previous, c * moments[n]), 1e-6)
        report.add('bls_%d' % n,
                   _relative(bls_expand(CX, m, n) - B[n], B[n]), 1e-10)
    report.add('anchor_beta0', B[0] - (c + alpha_m1), 1e-8)
    report.add('anchor_alpha_m1', alpha_m1 + gamma, 1e-8)

    if lam <= 1:
        series = RegressionSeries(A.coefficients, B.coefficients)
        report.add_table('series', ('n', 'alpha', 'beta'),
                         zip(range(order + 1), series.alpha, series.beta))
        report.note('phi(Y^-1) is infinite for lambda <= 1; '
                    'the delta series is skipped')
        return report.finish()
    d = beta / (lam - 1)
    delta0 = alpha / (lam - 1)
    mp = MarchenkoPasturParams(lam, 1 / alpha)
    phi_yinv = mp_moment(mp, -1)
    ry = CumulantSequence([lam * alpha ** -n for n in range(1, order + 1)])
    CY = mixed_inverse_cumulants(phi_yinv, ry, order + 1)
    D = series_compose_AC(A, TruncatedSeries(CY.values), order)
    for n in range(order - 1):
        report.add('s1_delta_%d' % n,
                   _relative(D[n + 2] - moments[n + 1] - d * moments[n],
                             D[n + 2], moments[n + 1], d * moments[n]), 1e-6)
    report.add('anchor_delta0', phi_yinv - delta0, 1e-8)
    report.add('anchor_delta1', D[1] - (d * alpha_m1 + 1), 1e-8)
    residual = quadratic_residual(TruncatedSeries(moments), c * d, d, delta0,
                                  alpha_m1)
    report.add('quadratic_moments', np.max(np.abs(residual)), 1e-8)
    series = RegressionSeries(A.coefficients, B.coefficients, D.coefficients)
    report.add_table('series', ('n', 'alpha', 'beta', 'delta'),
                     zip(range(order + 1), series.alpha, series.beta,
                         series.delta))
    return report.finish()


def ctr_sum_cauchy(constants, z, support):
    """G(z) of X+Y written through the regression constants.

    The radicand is a quartic with roots a, b and the double root
    x0 = -d/(delta0 sqrt(ab)); its root is picked pointwise closest to
    -delta0 (z - x0) sqrt(z-a) sqrt(z-b), which behaves like -delta0 z^2.
    """
    (c, d) = (constants.c, constants.d)
    (delta0, alpha_m1) = (constants.delta0, constants.alpha_m1)
    z = np.asarray(z, dtype=complex)
    cd1 = c * d - 1
    P = (delta0 * z * z - z - d) ** 2 \
        - 4 * cd1 * z * z * (d * alpha_m1 + z * delta0)
    root = np.sqrt(P)
    x0 = -d / (delta0 * support.sqrt_ab)
    reference = -delta0 * (z - x0) * np.sqrt(z - support.a) \
        * np.sqrt(z - support.b)
    root = np.where(np.abs(root - reference) <= np.abs(root + reference),
                    root, -root)
    return (-d + z * (z * delta0 - 1) + root) / (2 * cd1 * z * z)


def run_quadratic_A_check(p, order=10, points=None):
    """The series solving the A-quadratic is the moment series of
    fGIG(lambda, alpha, beta); its closed form matches the Cauchy
    transform."""
    _require_lambda(p)
    report = ExperimentReport('quadratic', _fgig_parameters(p))
    constants = regression_constants(p)
    (c, d) = (constants.c, constants.d)
    A = quadratic_A_solver(c * d, d, constants.delta0, constants.alpha_m1,
                           order)
    moments = _moment_series(p, order)
    errors = [_relative(A[n] - moments[n], moments[n])
              for n in range(order + 1)]
    report.add('moment_series', max(np.abs(errors)), 1e-8)
    residual = quadratic_residual(A, c * d, d, constants.delta0,
                                  constants.alpha_m1)
    report.add('quadratic_residual', np.max(np.abs(residual)), 1e-12)
    if points is None:
        points = np.array([1 + 1j, 2 + 0.5j, 0.5 + 2j, -1 + 1j, 5 + 0.1j,
                           10j])
    s = solve_support(p)
    closed = ctr_sum_cauchy(constants, points, s)
    exact = fgig_cauchy(p, s, points)
    report.add('cauchy_closed_form',
               np.max(np.abs(closed - exact) / np.abs(exact)), 1e-7)
    report.add_table('series', ('n', 'solver', 'moment'),
                     zip(range(order + 1), A.coefficients, moments))
    return report.finish()


def _my_replicate(p, n, stream, exploratory):
    """One draw of the matrix pair; None when it is too ill-conditioned."""
    (lam, alpha, beta) = p.astuple()
    q = FreeGigParams(-lam, alpha, beta)
    X = sample_fgig_matrix(n, q, stream)
    Y = sample_wishart(n, int(round(lam * n)), alpha * n, stream,
                       allow_singular=exploratory)
    try:
        (U, V) = my_transform(X, Y)
    except ConditioningError as e:
        log.warning('replicate excluded: %s', e)
        return None
    target = invert_params(p)
    st = solve_support(target)
    mp = MarchenkoPasturParams(lam, 1 / beta)
    (kappa2, alt4) = pair_statistics(U, V)
    (eU, eV) = (esd(U), esd(V))
    out = {
        'ks_U': ks_distance(eU, lambda x: fgig_cdf(target, st, x)),
        'ks_V': ks_distance(eV, lambda x: mp_cdf(mp, x)),
        'eig_U': eU.eigenvalues,
        'eig_V': eV.eigenvalues,
        'kappa2': kappa2,
        'alt4': alt4,
    }
    if 1 < lam:
        try:
            out['hua'] = hua_residual(X, Y)
            out.update(('phi_' + k, v)
                       for (k, v) in mixed_trace_moments(X, Y).items())
        except ConditioningError as e:
            log.warning('replicate excluded: %s', e)
            return None
    return out


def _my_size(p, n, reps, seed, workers, exploratory):
    streams = derive_streams([seed, n], reps)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(
            lambda stream: _my_replicate(p, n, stream, exploratory),
            streams))
    kept = [r for r in results if r is not None]
    return (kept, len(results) - len(kept))


def run_matrix_my(p, N=256, reps=20, seed=None, workers=1, trend_n=64,
                  exploratory=False):
    """U = (X+Y)^-1 and V = X^-1 - (X+Y)^-1 for Haar-rotated
    X ~ fGIG(-lambda, alpha, beta) and Wishart Y: laws, freeness and Hua's
    identity at dimension N."""
    _require_lambda(p, exploratory)
    if seed is None:
        raise ParameterError('run_matrix_my needs an explicit seed')
    if reps < 1:
        raise ParameterError('reps must be positive: %r' % reps)
    report = ExperimentReport('my', dict(_fgig_parameters(p), N=N, reps=reps),
                              seed=seed, exploratory=not 1 < p.lam)
    (kept, excluded) = _my_size(p, N, reps, seed, workers, exploratory)
    report.add('excluded_replicates', excluded, reps, kind='below')
    if not kept:
        report.note('every replicate was excluded')
        return report.finish()

    def column(key):
        return np.array([r[key] for r in kept])

    ks_U = float(np.median(column('ks_U')))
    ks_V = float(np.median(column('ks_V')))
    report.add('ks_U_median', ks_U, settings.KS_TOL, kind='below')
    report.add('ks_V_median', ks_V, settings.KS_TOL, kind='below')
    report.add('kappa2', np.mean(column('kappa2')), settings.FREENESS_TOL)
    report.add('alt4', np.mean(column('alt4')), settings.FREENESS_TOL)
    if 1 < p.lam:
        report.add('hua_max', np.max(column('hua')), 1e-9, kind='below')
        constants = RegressionConstants(
            p.lam / p.beta, p.beta / (p.lam - 1), p.alpha / (p.lam - 1),
            -gamma_const(p, solve_support(p)).value)
        q = FreeGigParams(-p.lam, p.alpha, p.beta)
        for (key, target) in (
                ('phi_V', constants.c), ('phi_V_inv', constants.d),
                ('phi_X_Yinv', fgig_moment(q, 1) * constants.delta0)):
            report.add(key, _relative(np.mean(column(key)) - target, target),
                       0.05)
    if trend_n:
        (small, _) = _my_size(p, trend_n, reps, seed, workers, exploratory)
        if small:
            for key in ('ks_U', 'ks_V'):
                median = float(np.median([r[key] for r in small]))
                report.add('%s_trend' % key,
                           float(np.median(column(key))) - median, 0.0,
                           kind='below')
    report.add_table('replicates', ('replicate', 'ks_U', 'ks_V', 'kappa2',
                                    'alt4'),
                     [(i, r['ks_U'], r['ks_V'], r['kappa2'], r['alt4'])
                      for (i, r) in enumerate(kept)])
    law_U = invert_params(p)
    st = solve_support(law_U)
    mp = MarchenkoPasturParams(p.lam, 1 / p.beta)
    xs_U = support_grid(st.a, st.b)
    xs_V = support_grid(*mp_support(mp))
    report.add_table('esd_U', ('eigenvalue',),
                     [(x,) for x in kept[0]['eig_U']])
    report.add_table('density_U', ('x', 'density'),
                     zip(xs_U, fgig_density(law_U, st, xs_U)))
    report.add_table('esd_V', ('eigenvalue',),
                     [(x,) for x in kept[0]['eig_V']])
    report.add_table('density_V', ('x', 'density'),
                     zip(xs_V, mp_density(mp, xs_V)[0]))
    return report.finish()


def run_wishart_limit(rate, alpha, N, seed):
    """ESD of a Wishart matrix against MP(rate, 1/alpha) and its edges."""
    if not 1 < rate:
        raise ParameterError('the edge check needs rate > 1: %r' % rate)
    if seed is None:
        raise ParameterError('run_wishart_limit needs an explicit seed')
    report = ExperimentReport('wishart', {'rate': rate, 'alpha': alpha,
                                          'N': N}, seed=seed)
    (rng,) = derive_streams([seed, N], 1)
    Y = sample_wishart(N, int(round(rate * N)), alpha * N, rng)
    e = esd(Y)
    mp = MarchenkoPasturParams(rate, 1 / alpha)
    (lo, hi) = mp_support(mp)
    report.add('ks', ks_distance(e, lambda x: mp_cdf(mp, x)),
               settings.KS_TOL, kind='below')
    report.add('min_edge', (e.eigenvalues[0] - lo) / lo, 0.1)
    report.add('max_edge', (e.eigenvalues[-1] - hi) / hi, 0.1)
    report.add_table('esd', ('eigenvalue',),
                     [(x,) for x in e.eigenvalues])
    xs = support_grid(lo, hi)
    report.add_table('density', ('x', 'density'),
                     zip(xs, mp_density(mp, xs)[0]))
    return report.finish()


def run_degeneration_check(p, points=200, epsilon=1e-6):
    """beta -> 0 gives MP(rate lambda, jump 1/alpha); alpha -> 0 gives the
    law of 1/Y for Y ~ MP(rate lambda, jump 1/beta)."""
    _require_lambda(p)
    report = ExperimentReport('degenerate', _fgig_parameters(p))
    (lam, alpha, beta) = p.astuple()
    p0 = FreeGigParams(lam, alpha, epsilon)
    mp = MarchenkoPasturParams(lam, 1 / alpha)
    xs = support_grid(*mp_support(mp), points=points)
    report.add('beta_limit',
               np.max(np.abs(fgig_density(p0, solve_support(p0), xs)
                             - mp_density(mp, xs)[0])), 1e-3)
    p1 = FreeGigParams(-lam, epsilon, beta)
    mp_inv = MarchenkoPasturParams(lam, 1 / beta)
    (lo, hi) = mp_support(mp_inv)
    ys = support_grid(1 / hi, 1 / lo, points)
    pushforward = mp_density(mp_inv, 1 / ys)[0] / (ys * ys)
    report.add('alpha_limit',
               np.max(np.abs(fgig_density(p1, solve_support(p1), ys)
                             - pushforward)), 1e-3)
    return report.finish()
