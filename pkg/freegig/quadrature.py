"""Quadrature for densities with square-root edges on a compact interval.

Every density handled here has the form ``sqrt((x-a)(b-x)) * f(x)`` with a
smooth ``f``.  The substitution ``x = c + h sin(theta)`` removes the edge
singularities, after which Gauss-Legendre rules converge geometrically.
"""
import functools
import logging
import math

import numpy as np

from . import settings
from .utils import FreeGigException

log = logging.getLogger(__name__)


class QuadratureError(FreeGigException):
    pass


@functools.lru_cache(maxsize=None)
def gauss_legendre(n):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def edge_map(a, b, theta):
    """x = c + h sin(theta) and the factor (x-a)(b-x) = h^2 cos(theta)^2.

    Both distances to the edges come from half angles,
    x - a = 2h sin(phi)^2 and b - x = 2h cos(phi)^2 with
    phi = theta/2 + pi/4, so a weight like 1/(x-a) cancels exactly
    instead of losing digits next to the edge.
    """
    h = (b - a) / 2
    phi = np.asarray(theta, dtype=float) / 2 + math.pi / 4
    left = 2 * h * np.sin(phi) ** 2
    right = 2 * h * np.cos(phi) ** 2
    x = np.where(phi < math.pi / 4, a + left, b - right)
    return x, left * right


def edge_rule(a, b, n):
    """Nodes and weights for the integral of f(x)*sqrt((x-a)(b-x)) on [a,b]."""
    t, wt = gauss_legendre(n)
    x, factor = edge_map(a, b, t * (math.pi / 2))
    return x, wt * (math.pi / 2) * factor


def integrate_edge(func, a, b, tol=None, min_nodes=None, max_nodes=None):
    """Integral of func(x)*sqrt((x-a)(b-x)) over [a,b].

    The node count doubles until two consecutive rules agree to `tol`
    relative to the value.
    """
    if tol is None:
        tol = settings.QUAD_TOL
    if min_nodes is None:
        min_nodes = settings.QUAD_MIN_NODES
    if max_nodes is None:
        max_nodes = settings.QUAD_MAX_NODES
    if not b > a:
        raise QuadratureError('empty interval [%r, %r]' % (a, b))
    n = min_nodes
    (prev, value) = (None, None)
    while n <= max_nodes:
        x, w = edge_rule(a, b, n)
        (prev, value) = (value, float(np.dot(w, func(x))))
        if not np.isfinite(value):
            raise QuadratureError('non-finite integrand on [%r, %r]'
                                  % (a, b))
        if prev is not None and abs(value - prev) <= tol * max(1.0,
                                                               abs(value)):
            log.debug('quadrature converged with %d nodes', n)
            return value
        n *= 2
    raise QuadratureError('no convergence with %d nodes: last two values '
                          '%r and %r' % (max_nodes, prev, value))


class EdgeCDF(object):
    """Tabulated cumulative mass of f(x)*sqrt((x-a)(b-x)) on [a,b].

    The angle range is cut into equal panels whose masses are computed
    once; evaluation adds a short Gauss-Legendre rule on the partial panel.
    Inversion bisects inside the panel holding the requested level.
    """

    def __init__(self, func, a, b, panels=None, order=None):
        if panels is None:
            panels = settings.CDF_PANELS
        if order is None:
            order = settings.CDF_PANEL_ORDER
        if not b > a:
            raise QuadratureError('empty interval [%r, %r]' % (a, b))
        self.func = func
        self.a = a
        self.b = b
        self.c = (a + b) / 2
        self.h = (b - a) / 2
        self.order = order
        self.edges = np.linspace(-math.pi / 2, math.pi / 2, panels + 1)
        masses = self._partial(self.edges[:-1], self.edges[1:])
        if np.any(masses < 0):
            raise QuadratureError('negative panel mass')
        self.cumulative = np.concatenate([[0.0], np.cumsum(masses)])
        self.total = float(self.cumulative[-1])
        return

    def __repr__(self):
        return '<EdgeCDF [%g, %g] mass=%.15g>' % (self.a, self.b, self.total)

    def _integrand(self, theta):
        (x, factor) = edge_map(self.a, self.b, theta)
        return factor * self.func(x)

    def _partial(self, lo, hi):
        """Integral in theta between the arrays lo and hi."""
        t, wt = gauss_legendre(self.order)
        lo = np.asarray(lo, dtype=float)[..., None]
        hi = np.asarray(hi, dtype=float)[..., None]
        half = (hi - lo) / 2
        theta = lo + half * (t + 1)
        return np.sum(wt * half * self._integrand(theta), axis=-1)

    def _panel(self, theta):
        k = np.searchsorted(self.edges, theta, side='right') - 1
        return np.clip(k, 0, len(self.edges) - 2)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = np.clip((x - self.c) / self.h, -1.0, 1.0)
        theta = np.arcsin(u)
        k = self._panel(theta)
        value = self.cumulative[k] + self._partial(self.edges[k], theta)
        return np.clip(value, 0.0, self.total)

    def ppf(self, q, tol=None):
        """Inverse of the tabulated mass; q must lie in [0, total]."""
        if tol is None:
            tol = settings.SAMPLER_TOL
        q = np.asarray(q, dtype=float)
        if np.any(q < 0) or np.any(q > self.total):
            raise QuadratureError('level outside [0, %r]' % self.total)
        k = np.searchsorted(self.cumulative, q, side='right') - 1
        k = np.clip(k, 0, len(self.edges) - 2)
        lo = self.edges[k].copy()
        hi = self.edges[k + 1].copy()
        target = q - self.cumulative[k]
        start = self.edges[k]
        width = self.edges[1] - self.edges[0]
        steps = max(1, int(math.ceil(math.log2(width * self.h / tol))) + 1)
        for _ in range(steps):
            mid = (lo + hi) / 2
            below = self._partial(start, mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return self.c + self.h * np.sin((lo + hi) / 2)
