"""Free GIG and Marchenko-Pastur laws.

The free GIG law mu(lambda, alpha, beta) has density

    (1/2pi) sqrt((x-a)(b-x)) (alpha/x + beta/(sqrt(ab) x^2))

on [a, b], where 0 < a < b solve

    1 - lambda + alpha sqrt(ab) - beta (a+b)/(2ab) = 0
    1 + lambda + beta/sqrt(ab) - alpha (a+b)/2 = 0

The Marchenko-Pastur (free Poisson) law with rate lambda and jump gamma
carries an atom max(0, 1-lambda) at 0 and free cumulants gamma^n lambda.
"""
import functools
import logging
import math

import numpy as np
from scipy import optimize

from . import settings
from .combinatorics import CumulantSequence
from .combinatorics import moments_from_cumulants
from .quadrature import EdgeCDF
from .quadrature import integrate_edge
from .transforms import AnalyticFunction
from .utils import FreeGigException, isnumber

log = logging.getLogger(__name__)


class SupportSolverError(FreeGigException):

    def __init__(self, msg, iterate=None, residuals=None):
        FreeGigException.__init__(self, msg)
        self.iterate = iterate
        self.residuals = residuals
        return


class SupportDomainError(FreeGigException):
    pass


class SingularityError(FreeGigException):
    pass


class DensityPositivityError(FreeGigException):
    pass


class FreeGigParams(object):
    """Parameters of the free GIG law.

    :param lam: the index lambda, any real number.
    :param alpha: positive scale of the 1/x term.
    :param beta: positive scale of the 1/x^2 term.
    """

    def __init__(self, lam, alpha, beta):
        self.lam = lam
        self.alpha = alpha
        self.beta = beta
        self._validate()
        self.lam = float(lam)
        self.alpha = float(alpha)
        self.beta = float(beta)
        return

    def _validate(self):
        for (name, value) in (('lambda', self.lam), ('alpha', self.alpha),
                              ('beta', self.beta)):
            if not isnumber(value):
                raise TypeError('%s must be a real number: %r'
                                % (name, value))
            if not math.isfinite(value):
                raise ValueError('%s must be finite: %r' % (name, value))
        if not 0 < self.alpha:
            raise ValueError('alpha must be positive: %r' % self.alpha)
        if not 0 < self.beta:
            raise ValueError('beta must be positive: %r' % self.beta)
        return

    def astuple(self):
        return (self.lam, self.alpha, self.beta)

    def __eq__(self, other):
        return isinstance(other, FreeGigParams) and \
            self.astuple() == other.astuple()

    def __hash__(self):
        return hash(('fgig',) + self.astuple())

    def __repr__(self):
        return '<FreeGigParams lambda=%g alpha=%g beta=%g>' % self.astuple()


class MarchenkoPasturParams(object):
    """Parameters of the Marchenko-Pastur law.

    :param rate: the rate lambda >= 0.
    :param jump: the jump size gamma > 0.
    """

    def __init__(self, rate, jump):
        self.rate = rate
        self.jump = jump
        self._validate()
        self.rate = float(rate)
        self.jump = float(jump)
        return

    def _validate(self):
        for (name, value) in (('rate', self.rate), ('jump', self.jump)):
            if not isnumber(value):
                raise TypeError('%s must be a real number: %r'
                                % (name, value))
            if not math.isfinite(value):
                raise ValueError('%s must be finite: %r' % (name, value))
        if self.rate < 0:
            raise ValueError('rate must be nonnegative: %r' % self.rate)
        if not 0 < self.jump:
            raise ValueError('jump must be positive: %r' % self.jump)
        return

    @property
    def atom(self):
        return max(0.0, 1.0 - self.rate)

    def astuple(self):
        return (self.rate, self.jump)

    def __eq__(self, other):
        return isinstance(other, MarchenkoPasturParams) and \
            self.astuple() == other.astuple()

    def __hash__(self):
        return hash(('mp',) + self.astuple())

    def __repr__(self):
        return '<MarchenkoPasturParams rate=%g jump=%g>' % self.astuple()


class SupportInterval(object):

    def __init__(self, a, b, residual1=0.0, residual2=0.0):
        self.a = a
        self.b = b
        self.residual1 = residual1
        self.residual2 = residual2
        assert 0 < a < b, (a, b)
        return

    @property
    def sqrt_ab(self):
        return math.sqrt(self.a * self.b)

    def __contains__(self, x):
        return self.a <= x <= self.b

    def __repr__(self):
        return '<SupportInterval [%.17g, %.17g] residuals=(%.1e, %.1e)>' % \
            (self.a, self.b, self.residual1, self.residual2)


class GammaConst(object):

    def __init__(self, value):
        self.value = value
        return

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return '<GammaConst %.17g>' % self.value


def support_residuals(p, a, b):
    """Left-hand sides of the two support equations at (a, b)."""
    (lam, alpha, beta) = p.astuple()
    s = math.sqrt(a * b)
    r1 = 1 - lam + alpha * s - beta * (a + b) / (2 * a * b)
    r2 = 1 + lam + beta / s - alpha * (a + b) / 2
    return (r1, r2)


def _support_quartic(p):
    """With s = sqrt(ab) and t = (a+b)/2 the second equation gives
    t = (1 + lambda + beta/s)/alpha; the first one then reduces to a
    quartic in s with exactly one positive root."""
    (lam, alpha, beta) = p.astuple()
    return np.array([alpha * alpha, alpha * (1 - lam), 0.0,
                     -beta * (1 + lam), -beta * beta])


def _newton_root(coef, s):
    """Damped Newton on a polynomial; returns None when it stalls."""
    dcoef = np.polyder(coef)
    fs = np.polyval(coef, s)
    for it in range(settings.SUPPORT_MAX_ITER):
        if fs == 0:
            return s
        slope = np.polyval(dcoef, s)
        if not (slope != 0 and math.isfinite(slope)):
            return None
        step = fs / slope
        if abs(step) <= 1e-15 * max(1.0, s):
            return s - step
        t = 1.0
        while True:
            trial = s - t * step
            if 0 < trial:
                ft = np.polyval(coef, trial)
                if abs(ft) < abs(fs):
                    break
            t /= 2
            if t < 1e-12:
                return None
        log.debug('support newton %d: s=%r f=%r', it, trial, ft)
        (s, fs) = (trial, ft)
    return None


@functools.lru_cache(maxsize=1024)
def solve_support(p):
    """Endpoints 0 < a < b of the free GIG support."""
    assert isinstance(p, FreeGigParams), str(type(p))
    (lam, alpha, beta) = p.astuple()
    coef = _support_quartic(p)
    s0 = max((lam - 1) / alpha, math.sqrt(beta / alpha))
    s = _newton_root(coef, s0)
    if s is None or not 0 < s:
        log.info('newton stalled for %r, bracketing instead', p)
        upper = 1 + np.max(np.abs(coef[1:])) / coef[0]
        try:
            s = optimize.brentq(lambda x: np.polyval(coef, x), 0.0, upper,
                                xtol=1e-16, rtol=4 * np.finfo(float).eps,
                                maxiter=settings.SUPPORT_MAX_ITER)
        except (ValueError, RuntimeError) as e:
            raise SupportSolverError('no positive root for %r: %s' % (p, e),
                                     iterate=s)
    # either equation gives t = (a+b)/2 from s; near a degenerate
    # parameter one of them cancels, so keep the more accurate interval
    best = None
    for t in ((1 + lam + beta / s) / alpha,
              s * s * (1 - lam + alpha * s) / beta):
        if not s < t:
            continue
        b = t + math.sqrt((t - s) * (t + s))
        a = s * s / b
        if not 0 < a < b:
            continue
        (r1, r2) = support_residuals(p, a, b)
        error = max(abs(r1), abs(r2))
        if best is None or error < best[0]:
            best = (error, a, b, r1, r2)
    if best is None:
        raise SupportDomainError('no interval with 0<a<b for %r '
                                 '(sqrt(ab)=%r)' % (p, s))
    (_, a, b, r1, r2) = best
    if not (abs(r1) < settings.SUPPORT_TOL and abs(r2) < settings.SUPPORT_TOL):
        raise SupportSolverError('support residuals too large for %r: '
                                 '%r, %r' % (p, r1, r2),
                                 iterate=(a, b), residuals=(r1, r2))
    log.info('support of %r: [%.17g, %.17g]', p, a, b)
    return SupportInterval(a, b, r1, r2)


def _fgig_weight(p, s):
    """The smooth factor of the density next to sqrt((x-a)(b-x))."""
    alpha = p.alpha
    beta_s = p.beta / s.sqrt_ab

    def weight(x):
        w = (alpha / x + beta_s / (x * x)) / (2 * math.pi)
        if np.any(w < 0):
            raise DensityPositivityError('negative density for %r' % p)
        return w

    return weight


def fgig_density(p, s, x):
    x = np.asarray(x, dtype=float)
    inside = (s.a < x) & (x < s.b)
    xs = np.where(inside, x, s.a + s.b)
    root = np.sqrt(np.where(inside, (xs - s.a) * (s.b - xs), 0.0))
    return np.where(inside, root * _fgig_weight(p, s)(xs), 0.0)


def fgig_moment(p, k):
    """Integral of x^k against the free GIG law."""
    if not isinstance(k, (int, np.integer)):
        raise TypeError('moment order must be an integer: %r' % (k,))
    if settings.MAX_MOMENT_ORDER < abs(k):
        raise ValueError('|k| must not exceed %d: %r'
                         % (settings.MAX_MOMENT_ORDER, k))
    s = solve_support(p)
    weight = _fgig_weight(p, s)
    return integrate_edge(lambda x: x ** int(k) * weight(x), s.a, s.b)


@functools.lru_cache(maxsize=64)
def _fgig_table(p, s):
    return EdgeCDF(_fgig_weight(p, s), s.a, s.b)


def fgig_cdf(p, s, x):
    table = _fgig_table(p, s)
    return table(x) / table.total


def sample_spectrum(p, n, rng):
    """n i.i.d. draws from the free GIG law by inverting its CDF."""
    s = solve_support(p)
    table = _fgig_table(p, s)
    u = rng.random(n) * table.total
    return table.ppf(u)


def fgig_cauchy(p, s, z):
    """G(z) = integral of mu(dx)/(z-x), in closed form.

    sqrt((z-a)(z-b)) is taken as the product of principal roots, which
    behaves like z at infinity and is cut along [a, b] only.
    """
    z = np.asarray(z, dtype=complex)
    (lam, alpha, beta) = p.astuple()
    singular = ((z.imag == 0) & (s.a <= z.real) & (z.real <= s.b)) | (z == 0)
    if np.any(singular):
        raise SingularityError('G is singular at %r' % (z[singular],))
    q = np.sqrt(z - s.a) * np.sqrt(z - s.b)
    num = alpha * z * z - (lam - 1) * z - beta \
        - (alpha * z + beta / s.sqrt_ab) * q
    return num / (2 * z * z)


def gamma_const(p, s):
    (lam, alpha, beta) = p.astuple()
    ab = s.a * s.b
    value = (alpha * alpha * ab + beta * beta / ab
             - 2 * alpha * beta * ((s.a + s.b) / s.sqrt_ab - 1)
             - (lam - 1) ** 2) / (4 * beta)
    return GammaConst(value)


class FreeGigRTransform(object):
    """The R-transform of the free GIG law.

    r(z) = (-alpha + z(lambda+1) + sqrt(D(z))) / (2z(alpha-z)) where
    D(z) = (alpha + z(lambda-1))^2 - 4 beta z (z-alpha)(z-gamma) is a cubic
    with D(0) = alpha^2.  The root is alpha times the product of principal
    roots of (1 - z/z_k) over the simple roots z_k of D, times (1 - z/z_0)
    for a double root z_0.  Each factor equals 1 at the origin and is cut
    along the ray from z_k away from 0.
    """

    def __init__(self, p, s):
        self.params = p
        self.support = s
        (lam, alpha, beta) = p.astuple()
        self.gamma = gamma_const(p, s).value
        self.d1 = 2 * alpha * (lam - 1) - 4 * alpha * beta * self.gamma
        self.d2 = (lam - 1) ** 2 + 4 * beta * (alpha + self.gamma)
        self.d3 = -4 * beta
        roots = list(np.roots([self.d3, self.d2, self.d1, alpha * alpha]))
        self.double = []
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                (x, y) = (roots[i], roots[j])
                if abs(x - y) < 1e-6 * max(1.0, abs(x)):
                    z0 = (x + y) / 2
                    if abs(z0.imag) < 1e-9 * abs(z0):
                        z0 = z0.real
                    self.double.append(z0)
                    roots = [r for (k, r) in enumerate(roots)
                             if k not in (i, j)]
                    break
            if self.double:
                break
        self.simple = [complex(r) for r in roots]
        self.double = [complex(r) for r in self.double]
        self.pole = abs(alpha * lam + self.sqrt_disc(alpha)) > \
            1e-6 * alpha * (1 + abs(lam))
        limits = [abs(r) for r in self.simple]
        if self.pole:
            limits.append(alpha)
        self.radius = 0.9 * min(limits) if limits else np.inf
        log.debug('r-transform of %r: simple roots %r, double roots %r, '
                  'pole %r, radius %g', p, self.simple, self.double,
                  self.pole, self.radius)
        return

    def sqrt_disc(self, z):
        z = np.asarray(z, dtype=complex)
        value = self.params.alpha * np.ones(z.shape, dtype=complex)
        for r in self.simple:
            value = value * np.sqrt(1 - z / r)
        for r in self.double:
            value = value * (1 - z / r)
        return value

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        (lam, alpha, beta) = self.params.astuple()
        if np.any(np.abs(z - alpha) < 1e-12 * alpha):
            raise SingularityError('r is singular at z=alpha=%r' % alpha)
        root = self.sqrt_disc(z)
        poly = self.d1 + z * (self.d2 + z * self.d3)
        denom = root + alpha
        small = np.abs(denom) < 1e-3 * alpha
        safe_z = np.where(z == 0, 1, z)
        ratio = np.where(small, (root - alpha) / safe_z,
                         poly / np.where(small, 1, denom))
        return ((lam + 1) + ratio) / (2 * (alpha - z))

    def mean(self):
        (lam, alpha, beta) = self.params.astuple()
        return (lam - beta * self.gamma) / alpha


@functools.lru_cache(maxsize=64)
def _fgig_rtransform(p, s):
    return FreeGigRTransform(p, s)


def fgig_rtransform(p, s, z):
    return _fgig_rtransform(p, s)(z)


def fgig_rtransform_function(p):
    s = solve_support(p)
    r = _fgig_rtransform(p, s)
    return AnalyticFunction(r, radius=r.radius,
                            name='r[fgig(%g,%g,%g)]' % p.astuple())


def fgig_cauchy_function(p):
    s = solve_support(p)
    return AnalyticFunction(functools.partial(fgig_cauchy, p, s),
                            AnalyticFunction.UPPER_HALF_PLANE,
                            name='G[fgig(%g,%g,%g)]' % p.astuple())


def invert_params(p):
    """Law of X^-1 for X ~ mu(lambda, alpha, beta) is mu(-lambda, beta,
    alpha)."""
    return FreeGigParams(-p.lam, p.beta, p.alpha)


def mp_support(p):
    root = math.sqrt(p.rate)
    return (p.jump * (1 - root) ** 2, p.jump * (1 + root) ** 2)


def _mp_weight(p):
    def weight(x):
        return 1 / (2 * math.pi * p.jump * x)
    return weight


def mp_density(p, x):
    """(continuous density at x, atom at 0)."""
    x = np.asarray(x, dtype=float)
    (a, b) = mp_support(p)
    inside = (a < x) & (x < b) & (0 < x)
    xs = np.where(inside, x, b + 1)
    root = np.sqrt(np.where(inside, (xs - a) * (b - xs), 0.0))
    continuous = np.where(inside, root * _mp_weight(p)(xs), 0.0)
    return (continuous, p.atom)


@functools.lru_cache(maxsize=64)
def _mp_table(p):
    (a, b) = mp_support(p)
    return EdgeCDF(_mp_weight(p), a, b)


def mp_cdf(p, x):
    x = np.asarray(x, dtype=float)
    atom = np.where(0 <= x, p.atom, 0.0)
    if p.rate == 0:
        return atom
    table = _mp_table(p)
    continuous = table(x) * ((1 - p.atom) / table.total)
    return atom + continuous


def mp_moment(p, k):
    """Moments of the Marchenko-Pastur law; k = -1 needs rate > 1."""
    if not isinstance(k, (int, np.integer)):
        raise TypeError('moment order must be an integer: %r' % (k,))
    if k == 0:
        return 1.0
    if 0 < k:
        r = CumulantSequence([p.rate * p.jump ** n
                              for n in range(1, k + 1)])
        return moments_from_cumulants(r, k)[k]
    return mp_quadrature_moment(p, k)


def mp_quadrature_moment(p, k):
    """Integral of x^k against the law by quadrature.  The atom at 0 only
    counts for k = 0; k < 0 needs rate > 1."""
    if k < 0 and not 1 < p.rate:
        raise SupportDomainError('negative moments need rate > 1: %r' % p)
    (a, b) = mp_support(p)
    weight = _mp_weight(p)
    value = integrate_edge(lambda x: x ** int(k) * weight(x), a, b)
    if k == 0:
        value += p.atom
    return value


def mp_cauchy(p, z):
    """Closed-form Cauchy transform of the Marchenko-Pastur law."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularityError('G is singular at 0')
    (a, b) = mp_support(p)
    g = p.jump
    q = np.sqrt(z - a) * np.sqrt(z - b)
    return ((z + g - p.rate * g) - q) / (2 * z * g)


def mp_rtransform(p, z):
    z = np.asarray(z, dtype=complex)
    denom = 1 - p.jump * z
    if np.any(np.abs(denom) < 1e-14):
        raise SingularityError('r is singular at 1/jump=%r' % (1 / p.jump))
    return p.rate * p.jump / denom


def mp_rtransform_function(p):
    return AnalyticFunction(functools.partial(mp_rtransform, p),
                            radius=1 / p.jump,
                            name='r[mp(%g,%g)]' % p.astuple())


def mp_cauchy_function(p):
    return AnalyticFunction(functools.partial(mp_cauchy, p),
                            AnalyticFunction.UPPER_HALF_PLANE,
                            name='G[mp(%g,%g)]' % p.astuple())
