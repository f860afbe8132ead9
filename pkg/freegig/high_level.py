"""Functions that can be used for the most common use-cases for freegig"""

import concurrent.futures
import logging
import os.path

import numpy as np

from .combinatorics import MomentSequence
from .combinatorics import cumulants_from_moments
from .distributions import FreeGigParams
from .distributions import MarchenkoPasturParams
from .distributions import fgig_cauchy_function
from .distributions import fgig_density
from .distributions import fgig_moment
from .distributions import fgig_rtransform_function
from .distributions import mp_cauchy_function
from .distributions import mp_density
from .distributions import mp_moment
from .distributions import mp_quadrature_moment
from .distributions import mp_rtransform_function
from .distributions import mp_support
from .distributions import solve_support
from .experiments import ExperimentReport
from .experiments import run_convolution_check
from .experiments import run_degeneration_check
from .experiments import run_inverse_check
from .experiments import run_matrix_my
from .experiments import run_quadratic_A_check
from .experiments import run_regression_check
from .experiments import run_wishart_limit
from .experiments import support_grid
from .transforms import stieltjes_invert
from .transforms import taylor_coefficients
from .utils import FreeGigException, relative_residual
from .writer import ArtifactWriter

log = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2

def _law(params):
    if isinstance(params, FreeGigParams):
        return {'law': 'fgig', 'lambda': params.lam, 'alpha': params.alpha,
                'beta': params.beta}
    return {'law': 'mp', 'rate': params.rate, 'jump': params.jump}


def run_support(p):
    """Support endpoints of a free GIG law and the residuals of the two
    equations they solve."""
    report = ExperimentReport('support', _law(p))
    s = solve_support(p)
    report.add('support_eq1', s.residual1, 1e-10)
    report.add('support_eq2', s.residual2, 1e-10)
    report.add_table('support', ('a', 'b', 'sqrt_ab'),
                     [(s.a, s.b, s.sqrt_ab)])
    return report.finish()


def run_density(params, points=200):
    """Density on a grid over the support, its total mass and the density
    recovered from the closed-form Cauchy transform mid-support."""
    report = ExperimentReport('density', _law(params))
    if isinstance(params, FreeGigParams):
        s = solve_support(params)
        (a, b) = (s.a, s.b)
        G = fgig_cauchy_function(params)

        def density(x):
            return fgig_density(params, s, x)
        mass = fgig_moment(params, 0)
    else:
        (a, b) = mp_support(params)
        G = mp_cauchy_function(params)

        def density(x):
            return mp_density(params, x)[0]
        mass = mp_quadrature_moment(params, 0)
        report.note('atom at 0: %.17g' % params.atom)
    report.add('mass', mass - 1, 1e-8)
    margin = 0.1 * (b - a)
    mid = support_grid(a + margin, b - margin, min(points, 50))
    estimate = stieltjes_invert(G, mid)
    report.add('stieltjes_inversion',
               np.max(np.abs(estimate.values - density(mid))), 1e-5)
    xs = support_grid(a, b, points)
    report.add_table('density', ('x', 'density'), zip(xs, density(xs)))
    return report.finish()


def run_moments(params, order=8):
    """Moments of order -order..order (MP: 1..order, plus -1 for
    rate > 1).  MP moments are compared with quadrature."""
    report = ExperimentReport('moments', dict(_law(params), order=order))
    rows = []
    if isinstance(params, FreeGigParams):
        for k in range(-order, order + 1):
            rows.append((k, fgig_moment(params, k)))
        report.add('moment_0', rows[order][1] - 1, 1e-8)
    else:
        worst = 0.0
        for k in range(1, order + 1):
            exact = mp_moment(params, k)
            worst = max(worst, relative_residual(
                mp_quadrature_moment(params, k), exact))
            rows.append((k, exact))
        report.add('quadrature', worst, 1e-8)
        if 1 < params.rate:
            rows.insert(0, (-1, mp_moment(params, -1)))
            report.add('inverse_moment',
                       rows[0][1] * params.jump * (params.rate - 1) - 1, 1e-8)
    report.add_table('moments', ('k', 'moment'), rows)
    return report.finish()


def run_cumulants(params, order=8):
    """Free cumulants from the moments, against the Taylor coefficients of
    the closed-form r-transform."""
    report = ExperimentReport('cumulants', dict(_law(params), order=order))
    if isinstance(params, FreeGigParams):
        moments = [fgig_moment(params, k) for k in range(1, order + 1)]
        r = fgig_rtransform_function(params)
    else:
        moments = [mp_moment(params, k) for k in range(1, order + 1)]
        r = mp_rtransform_function(params)
    cumulants = cumulants_from_moments(MomentSequence(moments), order)
    taylor = taylor_coefficients(r, order - 1,
                                 radius=min(0.5 * r.radius, 1.0))
    worst = max(relative_residual(taylor[n], cumulants[n + 1])
                for n in range(order))
    report.add('rtransform_taylor', worst, 1e-6)
    report.add_table('cumulants', ('n', 'cumulant', 'taylor'),
                     [(n + 1, cumulants[n + 1], taylor[n])
                      for n in range(order)])
    return report.finish()


def _jobs(config):
    """(label, callable) per parameter tuple, in configuration order."""
    name = config.experiment
    if name == 'wishart':
        return [('rate%g_alpha%g' % (rate, alpha),
                 lambda rate=rate, alpha=alpha: run_wishart_limit(
                     rate, alpha, config.n, config.seed))
                for (rate, alpha) in zip(config.rate, config.alpha)]
    if config.uses_mp():
        laws = [MarchenkoPasturParams(rate, jump)
                for (rate, jump) in zip(config.rate, config.jump)]
    else:
        laws = [FreeGigParams(lam, alpha, beta) for (lam, alpha, beta)
                in zip(config.lam, config.alpha, config.beta)]
    workers = config.workers if len(laws) == 1 else 1
    runners = {
        'support': lambda p: run_support(p),
        'density': lambda p: run_density(p, config.grid),
        'moments': lambda p: run_moments(p, config.order),
        'cumulants': lambda p: run_cumulants(p, config.order),
        'convolve': lambda p: run_convolution_check(p, points=config.grid),
        'inverse': lambda p: run_inverse_check(p, points=config.grid),
        'regression': lambda p: run_regression_check(
            p, order=config.order, exploratory=config.exploratory),
        'quadratic': lambda p: run_quadratic_A_check(p, order=config.order),
        'degenerate': lambda p: run_degeneration_check(p, config.grid),
        'my': lambda p: run_matrix_my(
            p, N=config.n, reps=config.reps, seed=config.seed,
            workers=workers, exploratory=config.exploratory),
    }
    runner = runners[name]
    jobs = []
    for p in laws:
        if isinstance(p, FreeGigParams):
            label = 'lambda%g_alpha%g_beta%g' % p.astuple()
        else:
            label = 'rate%g_jump%g' % p.astuple()
        jobs.append((label, lambda p=p: runner(p)))
    return jobs


def _attempt(job):
    """Runs a job; any failure is returned so it can be reported."""
    try:
        return job()
    except FreeGigException as e:
        log.error('job failed: %s: %s', e.__class__.__name__, e)
        return e
    except Exception as e:
        log.exception('job crashed: %s: %s', e.__class__.__name__, e)
        return e


def run(config):
    """Runs the configured experiment and writes its artifacts.

    Jobs run on a pool of config.workers threads; every artifact is written
    from the calling thread in job order.  With several parameter tuples
    each job gets its own subdirectory of config.output_dir.

    :param config: a validated freegig.cli.RunConfig.
    :return: 0 when every check passed (or the runs are exploratory),
        1 on a failed check or a module error, 2 on an I/O error.
    """
    if config.debug:
        logging.getLogger().setLevel(logging.DEBUG)

    jobs = _jobs(config)
    log.info('running %s: %d job(s) on %d worker(s)', config.experiment,
             len(jobs), config.workers)
    try:
        writers = []
        for (label, _) in jobs:
            outdir = config.output_dir
            if 1 < len(jobs):
                outdir = os.path.join(outdir, label)
            writers.append(ArtifactWriter(outdir))
    except OSError as e:
        log.error('cannot prepare output directory: %s', e)
        return EXIT_INVALID

    with concurrent.futures.ThreadPoolExecutor(
            max_workers=config.workers) as pool:
        results = list(pool.map(_attempt, [job for (_, job) in jobs]))

    code = EXIT_PASS
    try:
        for (writer, result) in zip(writers, results):
            if isinstance(result, Exception):
                writer.write_error(result, config.experiment)
                code = max(code, EXIT_FAIL)
                continue
            result.seed = config.seed if result.seed is None else result.seed
            writer.write_report(result)
            if result.passed is False:
                log.warning('%s: check failed %r', config.experiment,
                            [r.name for r in result.residuals
                             if not r.passed])
                code = max(code, EXIT_FAIL)
    except OSError as e:
        log.error('cannot write artifacts: %s', e)
        return EXIT_INVALID
    return code
