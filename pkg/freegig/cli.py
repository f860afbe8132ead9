"""A command line tool for free GIG and Marchenko-Pastur numerics and the
free Matsumoto-Yor checks.  Writes reports, CSV tables and SVG plots."""
import argparse
import logging
import math
import sys

from . import settings
from .high_level import EXIT_INVALID
from .high_level import run
from .utils import FreeGigException, isnumber

log = logging.getLogger(__name__)

EXPERIMENTS = ('support', 'density', 'moments', 'cumulants', 'convolve',
               'inverse', 'regression', 'my', 'quadratic', 'wishart',
               'degenerate')

# experiments that take a Marchenko-Pastur law when --rate/--jump is given
MP_EXPERIMENTS = ('density', 'moments', 'cumulants')
NEEDS_LAMBDA_ABOVE_ONE = ('convolve', 'regression', 'my', 'quadratic',
                          'degenerate')
EXPLORATORY = ('regression', 'my')
SEEDED = ('my', 'wishart')


class ConfigError(FreeGigException):

    def __init__(self, msg, field=None, line=None):
        if line is not None:
            msg = 'line %d: %s' % (line, msg)
        FreeGigException.__init__(self, msg)
        self.field = field
        self.line = line
        return


def _floats(text):
    return [float(x) for x in text.replace(',', ' ').split()]


def _boolean(text):
    value = text.strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('not a boolean: %r' % text)


# config file key -> (RunConfig attribute, converter)
FIELDS = {
    'experiment': ('experiment', str.strip),
    'lambda': ('lam', _floats),
    'alpha': ('alpha', _floats),
    'beta': ('beta', _floats),
    'rate': ('rate', _floats),
    'jump': ('jump', _floats),
    'n': ('n', int),
    'reps': ('reps', int),
    'order': ('order', int),
    'grid': ('grid', int),
    'seed': ('seed', int),
    'output_dir': ('output_dir', str.strip),
    'workers': ('workers', int),
    'exploratory': ('exploratory', _boolean),
}


class RunConfig(object):
    """A validated experiment configuration.

    :param experiment: one of EXPERIMENTS.
    :param lam, alpha, beta: lists of free GIG parameters, zipped into
        one job per tuple.  wishart zips rate with alpha.
    :param rate, jump: lists of Marchenko-Pastur parameters.
    :param n: matrix dimension N.
    :param reps: number of Monte Carlo replicates.
    :param order: series or moment order.
    :param grid: number of grid points over a support.
    :param seed: master seed; required by the random-matrix experiments.
    :param output_dir: directory receiving the artifacts.
    :param workers: size of the worker pool.
    :param exploratory: allows 0 < lambda <= 1 for regression and my.
    """

    def __init__(self, experiment, lam=None, alpha=None, beta=None,
                 rate=None, jump=None, n=256, reps=20, order=8, grid=200,
                 seed=None, output_dir='fgig-out', workers=1,
                 exploratory=False, debug=False):
        self.experiment = experiment
        self.lam = list(lam or [])
        self.alpha = list(alpha or [])
        self.beta = list(beta or [])
        self.rate = list(rate or [])
        self.jump = list(jump or [])
        self.n = n
        self.reps = reps
        self.order = order
        self.grid = grid
        self.seed = seed
        self.output_dir = output_dir
        self.workers = workers
        self.exploratory = exploratory
        self.debug = debug
        self._validate()
        return

    def uses_mp(self):
        return self.experiment in MP_EXPERIMENTS and bool(self.rate) \
            and not self.lam

    def _require(self, *fields):
        lengths = set()
        for field in fields:
            values = getattr(self, field)
            if not values:
                raise ConfigError('%s needs %s' % (self.experiment, field),
                                  field=field)
            for v in values:
                if not (isnumber(v) and math.isfinite(v)):
                    raise ConfigError('%s must be finite: %r' % (field, v),
                                      field=field)
            lengths.add(len(values))
        if 1 < len(lengths):
            raise ConfigError('%s must have equal lengths' % ', '.join(fields),
                              field=fields[0])
        return

    def _positive(self, field):
        for v in getattr(self, field):
            if not 0 < v:
                raise ConfigError('%s must be positive: %r' % (field, v),
                                  field=field)
        return

    def _validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError('unknown experiment %r' % (self.experiment,),
                              field='experiment')
        for field in ('n', 'reps', 'order', 'grid', 'workers'):
            value = getattr(self, field)
            if not (isinstance(value, int) and 1 <= value):
                raise ConfigError('%s must be a positive integer: %r'
                                  % (field, value), field=field)
        if settings.NC_MAX_ORDER < self.order:
            raise ConfigError('order must not exceed %d: %r'
                              % (settings.NC_MAX_ORDER, self.order),
                              field='order')
        if self.experiment in SEEDED and self.seed is None:
            raise ConfigError('%s needs an explicit --seed' % self.experiment,
                              field='seed')
        if self.exploratory and self.experiment not in EXPLORATORY:
            raise ConfigError('exploratory mode only applies to %s'
                              % ' and '.join(EXPLORATORY),
                              field='exploratory')
        if self.experiment == 'wishart':
            self._require('rate', 'alpha')
            self._positive('alpha')
            for v in self.rate:
                if not 1 < v:
                    raise ConfigError('wishart needs rate > 1: %r' % v,
                                      field='rate')
            return
        if self.uses_mp():
            self._require('rate', 'jump')
            self._positive('rate')
            self._positive('jump')
            return
        self._require('lam', 'alpha', 'beta')
        self._positive('alpha')
        self._positive('beta')
        if self.experiment in NEEDS_LAMBDA_ABOVE_ONE:
            for v in self.lam:
                if 1 < v:
                    continue
                if self.exploratory and 0 < v:
                    continue
                raise ConfigError('%s needs lambda > 1, got %r'
                                  % (self.experiment, v), field='lambda')
        return

    def __repr__(self):
        return '<RunConfig %s lambda=%r alpha=%r beta=%r rate=%r jump=%r ' \
            'n=%d reps=%d seed=%r>' % (self.experiment, self.lam, self.alpha,
                                       self.beta, self.rate, self.jump,
                                       self.n, self.reps, self.seed)


def read_config_file(fp):
    """Flat `key = value` lines; '#' starts a comment."""
    values = {}
    for (lineno, line) in enumerate(fp, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError('expected key = value: %r' % line, line=lineno)
        (key, value) = (x.strip() for x in line.split('=', 1))
        if key not in FIELDS:
            raise ConfigError('unknown key %r' % key, field=key, line=lineno)
        (attr, convert) = FIELDS[key]
        if attr in values:
            raise ConfigError('duplicate key %r' % key, field=key,
                              line=lineno)
        try:
            values[attr] = convert(value)
        except ValueError as e:
            raise ConfigError('bad value for %r: %s' % (key, e), field=key,
                              line=lineno)
    return values


def maketheparser():
    parser = argparse.ArgumentParser(description=__doc__, add_help=True)
    parser.add_argument(
        "experiment", type=str, nargs="?", default=None, choices=EXPERIMENTS,
        help="The experiment to run. May also be given in the config file.")

    parser.add_argument(
        "--debug", "-d", default=False, action="store_true",
        help="Use debug logging level.")
    parser.add_argument(
        "--config", "-c", type=str, default=None,
        help="A file of `key = value` lines. Flags override its values.")
    parser.add_argument(
        "--workers", "-j", type=int, default=None,
        help="The number of worker threads (default 1).")

    law_params = parser.add_argument_group(
        'Laws', description='Parameters of the distributions. Several '
        'values run one job per position.')
    law_params.add_argument(
        "--lambda", "-l", dest="lam", type=float, default=None, nargs="+",
        help="The free GIG parameter lambda.")
    law_params.add_argument(
        "--alpha", "-a", type=float, default=None, nargs="+",
        help="The free GIG parameter alpha > 0; the Wishart scale for "
             "wishart.")
    law_params.add_argument(
        "--beta", "-b", type=float, default=None, nargs="+",
        help="The free GIG parameter beta > 0.")
    law_params.add_argument(
        "--rate", "-r", type=float, default=None, nargs="+",
        help="The Marchenko-Pastur rate. Used by wishart, and by density, "
             "moments and cumulants when no --lambda is given.")
    law_params.add_argument(
        "--jump", "-g", type=float, default=None, nargs="+",
        help="The Marchenko-Pastur jump size.")

    run_params = parser.add_argument_group(
        'Run', description='Sizes, orders and randomness.')
    run_params.add_argument(
        "--n", "-N", dest="n", type=int, default=None,
        help="The matrix dimension (default 256).")
    run_params.add_argument(
        "--reps", type=int, default=None,
        help="The number of Monte Carlo replicates (default 20).")
    run_params.add_argument(
        "--order", "-k", type=int, default=None,
        help="The series or moment order (default 8).")
    run_params.add_argument(
        "--grid", type=int, default=None,
        help="The number of grid points over a support (default 200).")
    run_params.add_argument(
        "--seed", "-s", type=int, default=None,
        help="The master seed. Required by my and wishart.")
    run_params.add_argument(
        "--exploratory", "-x", default=None, action="store_true",
        help="Allow 0 < lambda <= 1 for regression and my. Such reports "
             "carry no pass verdict.")

    output_params = parser.add_argument_group(
        'Output', description='Used during artifact generation.')
    output_params.add_argument(
        "--output-dir", "-O", default=None,
        help="The directory receiving report.json, the CSV tables and the "
             "SVG plots (default fgig-out).")
    return parser


def parse_config(args=None):
    """Builds a RunConfig from command line flags and an optional config
    file; flags win over the file."""
    P = maketheparser()
    A = P.parse_args(args=args)
    values = {}
    if A.config:
        try:
            with open(A.config, encoding='utf-8') as fp:
                values = read_config_file(fp)
        except OSError as e:
            raise ConfigError('cannot read config file: %s' % e,
                              field='config')
    for (attr, _) in FIELDS.values():
        flag = getattr(A, attr, None)
        if flag is not None:
            values[attr] = flag
    if 'experiment' not in values:
        raise ConfigError('no experiment given', field='experiment')
    values['debug'] = A.debug
    return RunConfig(**values)


# main


def main(args=None):
    logging.basicConfig()
    try:
        config = parse_config(args)
    except ConfigError as e:
        log.error('invalid configuration: %s', e)
        return EXIT_INVALID
    log.info('configuration: %r', config)
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
