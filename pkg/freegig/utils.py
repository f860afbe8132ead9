"""
Miscellaneous Routines.
"""
import logging
import math
import numbers

import numpy as np

log = logging.getLogger(__name__)


class FreeGigException(Exception):
    pass


class open_filename(object):
    """
    Context manager that allows opening a filename and closes it on exit,
    (just like `open`), but does nothing for file-like objects.
    """
    def __init__(self, filename, *args, **kwargs):
        if isinstance(filename, str):
            self.file_handler = open(filename, *args, **kwargs)
            self.closing = True
        else:
            self.file_handler = filename
            self.closing = False

    def __enter__(self):
        return self.file_handler

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.closing:
            self.file_handler.close()
        return False


def isnumber(x):
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def catalan(n):
    """Number of non-crossing partitions of an n-element set."""
    assert isinstance(n, int) and n >= 0, str(n)
    return math.factorial(2 * n) // (math.factorial(n) * math.factorial(n + 1))


def format_float(x):
    """Round-trippable text form of a float (17 significant digits)."""
    return '%.17g' % float(x)


def make_rng(seed):
    """Returns a numpy Generator for a seed or passes a Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError('an explicit seed is required')
    return np.random.default_rng(seed)


def derive_streams(seed, count):
    """Independent generators, one per replicate, from one master seed.

    The i-th stream depends only on (seed, i), never on scheduling.  A
    sequence of integers is accepted as the seed as well.
    """
    if seed is None:
        raise ValueError('an explicit seed is required')
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def poly_mul(p, q, order):
    """Product of two coefficient arrays truncated after z**order."""
    r = np.convolve(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    out = np.zeros(order + 1)
    n = min(len(r), order + 1)
    out[:n] = r[:n]
    return out


def relative_residual(value, target):
    return abs(value - target) / max(1.0, abs(target))
