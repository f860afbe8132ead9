"""Cauchy and R-transform calculus on analytic functions and series.

Functions here accept numpy arrays of complex points and evaluate
pointwise; scalars go in and come out as 0-d values.
"""
import logging

import numpy as np

from . import settings
from .combinatorics import CumulantSequence
from .combinatorics import moments_from_cumulants
from .utils import FreeGigException, poly_mul

log = logging.getLogger(__name__)


class DomainError(FreeGigException):
    pass


class DegenerateSeriesError(DomainError):
    pass


class InversionUnstableError(FreeGigException):
    pass


class ContinuationError(FreeGigException):

    def __init__(self, msg, iterate=None, residual=None):
        FreeGigException.__init__(self, msg)
        self.iterate = iterate
        self.residual = residual
        return


class AnalyticFunction(object):
    """A complex function together with the domain it is analytic on.

    :param func: callable evaluated on numpy arrays of complex points.
    :param domain: UPPER_HALF_PLANE or DISK.
    :param radius: radius of the disk around the origin (DISK only).
    """

    UPPER_HALF_PLANE = 'upper'
    DISK = 'disk'

    def __init__(self, func, domain=DISK, radius=np.inf, name=None):
        self.func = func
        self.domain = domain
        self.radius = radius
        self.name = name or getattr(func, '__name__', 'f')
        self._validate()
        return

    def _validate(self):
        if not callable(self.func):
            raise TypeError('func must be callable: %r' % (self.func,))
        if self.domain not in (self.UPPER_HALF_PLANE, self.DISK):
            raise ValueError('unknown domain %r' % (self.domain,))
        if self.domain == self.DISK and not 0 < self.radius:
            raise ValueError('disk radius must be positive: %r'
                             % (self.radius,))
        return

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        if self.domain == self.DISK:
            return np.abs(z) < self.radius
        return 0 < z.imag

    def __repr__(self):
        if self.domain == self.DISK:
            return '<AnalyticFunction %s |z|<%g>' % (self.name, self.radius)
        return '<AnalyticFunction %s Im z>0>' % self.name


def cauchy_function(G, name=None):
    """Wraps a Cauchy transform as an upper half-plane function."""
    return AnalyticFunction(G, AnalyticFunction.UPPER_HALF_PLANE,
                            name=name or 'G')


class DensityEstimate(object):

    def __init__(self, grid, values, epsilon_used):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.epsilon_used = epsilon_used
        assert self.grid.shape == self.values.shape, \
            (self.grid.shape, self.values.shape)
        return

    def mass(self):
        """Trapezoid integral over the grid."""
        return float(np.sum(np.diff(self.grid)
                            * (self.values[1:] + self.values[:-1]) / 2))

    def __repr__(self):
        return '<DensityEstimate %d points eps=%g>' % (len(self.grid),
                                                      self.epsilon_used)


class TruncatedSeries(object):

    def __init__(self, coefficients):
        self.coefficients = np.array(coefficients, dtype=float)
        if self.coefficients.ndim != 1 or len(self.coefficients) < 1:
            raise ValueError('a series needs at least one coefficient')
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError('non-finite coefficient in %r'
                             % (self.coefficients,))
        return

    @property
    def order(self):
        return len(self.coefficients) - 1

    def __getitem__(self, n):
        return float(self.coefficients[n])

    def __len__(self):
        return len(self.coefficients)

    def evaluate(self, z):
        return np.polyval(self.coefficients[::-1], z)

    def __repr__(self):
        return '<TruncatedSeries order=%d %r>' % (self.order,
                                                  self.coefficients[:4])


def _extrapolation_weights(epsilons):
    """Lagrange weights giving the value at 0 of the interpolant."""
    weights = []
    for (i, e) in enumerate(epsilons):
        w = 1.0
        for (j, f) in enumerate(epsilons):
            if i != j:
                w *= -f / (e - f)
        weights.append(w)
    return np.array(weights)


def stieltjes_invert(G, grid, epsilons=None, tol=None):
    """Density -Im G(t + i eps)/pi extrapolated to eps = 0."""
    if epsilons is None:
        epsilons = settings.STIELTJES_EPSILONS
    if tol is None:
        tol = settings.STIELTJES_TOL
    epsilons = sorted(epsilons, reverse=True)
    grid = np.asarray(grid, dtype=float)
    samples = np.array([-np.imag(G(grid + 1j * e)) / np.pi
                        for e in epsilons])
    values = _extrapolation_weights(epsilons) @ samples
    if 3 <= len(epsilons):
        steps = np.diff(samples, axis=0)
        wobbly = np.any(steps[:-1] * steps[1:] < 0, axis=0)
        disagree = tol < np.abs(values - samples[-1])
        bad = wobbly & disagree
        if np.any(bad):
            raise InversionUnstableError(
                'extrapolation unstable at t=%r' % (grid[bad][:5],))
    negative = values < -tol
    if np.any(negative):
        if settings.STRICT:
            raise InversionUnstableError('negative density %r at t=%r'
                                         % (values[negative][:5],
                                            grid[negative][:5]))
        log.warning('clamping %d negative density values (min %g)',
                    np.count_nonzero(negative), values.min())
    values = np.maximum(values, 0.0)
    return DensityEstimate(grid, values, epsilons[-1])


def free_convolve_r(r1, r2):
    """R-transform of the free additive convolution: r1 + r2."""
    assert isinstance(r1, AnalyticFunction), str(type(r1))
    assert isinstance(r2, AnalyticFunction), str(type(r2))
    if r1.domain != AnalyticFunction.DISK or \
       r2.domain != AnalyticFunction.DISK:
        raise DomainError('R-transforms live on disks around 0')
    radius = min(r1.radius, r2.radius)
    if not 0 < radius:
        raise DomainError('disjoint domains')

    def convolved(z):
        return r1(z) + r2(z)

    return AnalyticFunction(convolved, radius=radius,
                            name='%s+%s' % (r1.name, r2.name))


def _newton_inverse(r, target, w, tol, max_iter):
    """Solves r(w) + 1/w = target elementwise, starting from w."""
    scale = np.maximum(1.0, np.abs(target))
    F = r(w) + 1 / w - target
    for it in range(max_iter):
        done = np.abs(F) <= tol * scale
        if np.all(done):
            break
        h = 1e-6 * np.maximum(np.abs(w), 1e-3)
        dK = (r(w + h) - r(w - h)) / (2 * h) - 1 / (w * w)
        step = np.where(done, 0, F / np.where(dK == 0, 1, dK))
        t = np.ones(w.shape)
        for _ in range(30):
            trial = w - t * step
            Ft = r(trial) + 1 / trial - target
            bad = ~done & ~(np.isfinite(Ft) & (np.abs(Ft) < np.abs(F)))
            if not np.any(bad):
                break
            t = np.where(bad, t / 2, t)
        improved = ~done & np.isfinite(Ft)
        w = np.where(improved, trial, w)
        F = np.where(improved, Ft, F)
        log.debug('newton iteration %d: max residual %g', it,
                  np.max(np.abs(F) / scale))
    return (w, F)


def cauchy_from_r(r, z, steps=None, tol=None, max_iter=None):
    """Cauchy transform w = G(z) recovered from r(w) + 1/w = z.

    The root is continued along the straight segment from 8i(1+|z|) to z;
    nodes cluster towards z where G varies fastest.
    """
    if steps is None:
        steps = settings.CONTINUATION_STEPS
    if tol is None:
        tol = settings.NEWTON_TOL
    if max_iter is None:
        max_iter = settings.NEWTON_MAX_ITER
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    if np.any(z.imag <= 0):
        raise DomainError('cauchy_from_r needs Im z > 0')
    start = 8j * (1 + np.abs(z))
    w = 1 / start
    for k in range(steps + 1):
        frac = 1 - (1 - k / steps) ** 3
        target = start + (z - start) * frac
        loose = tol if k == steps else max(tol, 1e-8)
        (w, F) = _newton_inverse(r, target, w, loose, max_iter)
    scale = np.maximum(1.0, np.abs(z))
    failed = ~(np.abs(F) <= tol * scale)
    if np.any(failed):
        raise ContinuationError('Newton continuation failed at z=%r'
                                % (z[failed][:3],),
                                iterate=w[failed], residual=F[failed])
    return w.reshape(shape)


def taylor_coefficients(f, order, radius=None, points=None):
    """Taylor coefficients of f at 0 by the trapezoid rule on a circle."""
    if radius is None:
        radius = 0.5 * f.radius
    if points is None:
        points = settings.TAYLOR_POINTS
    points = max(points, 2 * (order + 1))
    if not 0 < radius < np.inf:
        raise DomainError('need a finite positive radius, got %r' % radius)
    z = radius * np.exp(2j * np.pi * np.arange(points) / points)
    values = np.fft.fft(f(z)) / points
    coefficients = values[:order + 1] / radius ** np.arange(order + 1)
    return TruncatedSeries(coefficients.real)


def moment_series_from_r(r, order):
    """A(z) = 1 + sum m_n z^n from r(z) = sum R_(n+1) z^n."""
    assert isinstance(r, TruncatedSeries), str(type(r))
    if len(r) < order:
        raise DomainError('need %d cumulants, got %d' % (order, len(r)))
    m = moments_from_cumulants(CumulantSequence(r.coefficients[:order]),
                               order)
    return TruncatedSeries(m.series())


def series_compose_AC(A, C, order):
    """Coefficients of A(z) C(z A(z)) where C(w) = sum C_(i+1) w^i."""
    assert isinstance(A, TruncatedSeries), str(type(A))
    assert isinstance(C, TruncatedSeries), str(type(C))
    if A.order < order or C.order < order:
        raise DomainError('series shorter than order %d' % order)
    a = A.coefficients[:order + 1]
    out = np.zeros(order + 1)
    power = np.ones(1)
    for i in range(order + 1):
        power = poly_mul(power, a, order)
        out[i:] += C.coefficients[i] * power[:order + 1 - i]
    return TruncatedSeries(out)


def quadratic_A_solver(cd, d, delta0, alpha_m1, order):
    """Power series A with A(0) = 1 solving
    (cd-1) z A^2 + (d z^2 + z - delta0) A + z d alpha_m1 + delta0 = 0."""
    if delta0 == 0:
        raise DegenerateSeriesError('leading coefficient delta0 vanishes')
    if delta0 < 0:
        raise DomainError('delta0 must be positive: %r' % delta0)
    if not 1 < cd:
        raise DomainError('cd must exceed 1: %r' % cd)
    a = np.zeros(order + 1)
    a[0] = 1.0
    for n in range(1, order + 1):
        value = (cd - 1) * np.dot(a[:n], a[n - 1::-1]) + a[n - 1]
        if 2 <= n:
            value += d * a[n - 2]
        else:
            value += d * alpha_m1
        a[n] = value / delta0
    return TruncatedSeries(a)


def quadratic_residual(A, cd, d, delta0, alpha_m1):
    """Coefficients of the left-hand side of the A-quadratic, relative to
    the size of the terms they cancel."""
    assert isinstance(A, TruncatedSeries), str(type(A))
    order = A.order
    a = A.coefficients
    square = poly_mul(a, a, order)
    terms = np.zeros((5, order + 1))
    terms[0, 1:] = (cd - 1) * square[:order]
    terms[1, 2:] = d * a[:order - 1]
    terms[2, 1:] = a[:order]
    terms[3] = -delta0 * a
    terms[4, 0] = delta0
    if 1 <= order:
        terms[4, 1] = d * alpha_m1
    total = terms.sum(axis=0)
    size = np.maximum(1.0, np.abs(terms).max(axis=0))
    return total / size
