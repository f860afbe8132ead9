"""Non-crossing partitions and the moment-cumulant calculus.

Moments and free cumulants are tied by the sum over non-crossing
partitions of products of cumulants indexed by block sizes.  Grouping that
sum by the block holding the first element gives the recursion used
throughout this module: the block of size s leaves s independent gaps, each
carrying its own non-crossing partition.
"""
import logging
import threading

import numpy as np

from . import settings
from .utils import FreeGigException, catalan, poly_mul

log = logging.getLogger(__name__)


class BoundedResourceError(FreeGigException):
    pass


class SeriesLengthError(FreeGigException):
    pass


INVERSE = -1
DIRECT = 1


def _check_order(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError('order must be a positive integer: %r' % (n,))
    if settings.NC_MAX_ORDER < n:
        raise BoundedResourceError('order %d exceeds the cap %d'
                                   % (n, settings.NC_MAX_ORDER))
    return int(n)


class SetPartition(object):

    def __init__(self, blocks, n=None):
        blocks = [tuple(sorted(int(i) for i in b)) for b in blocks]
        blocks.sort(key=lambda b: b[0] if b else 0)
        self.blocks = tuple(blocks)
        if n is None:
            n = sum(len(b) for b in blocks)
        self.n = n
        self._validate()
        return

    @classmethod
    def _trusted(cls, blocks, n):
        obj = cls.__new__(cls)
        obj.blocks = tuple(sorted(blocks))
        obj.n = n
        return obj

    def _validate(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError('empty block in %r' % (self.blocks,))
            for i in b:
                if i in seen:
                    raise ValueError('element %d in two blocks' % i)
                seen.add(i)
        if seen != set(range(1, self.n + 1)):
            raise ValueError('blocks do not cover {1..%d}' % self.n)
        return

    def __eq__(self, other):
        return isinstance(other, SetPartition) and \
            (self.n, self.blocks) == (other.n, other.blocks)

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return '<SetPartition %s>' % ','.join(
            '{%s}' % ','.join(map(str, b)) for b in self.blocks)


def is_noncrossing(p):
    """True unless two blocks interleave as i1 < j1 < i2 < j2."""
    assert isinstance(p, SetPartition), str(type(p))
    label = {}
    for (k, b) in enumerate(p.blocks):
        for i in b:
            label[i] = k
    for (k, b) in enumerate(p.blocks):
        for (j, c) in enumerate(p.blocks[k+1:], k + 1):
            if c[0] > b[-1] or b[0] > c[-1]:
                continue
            runs = 0
            prev = None
            for i in range(min(b[0], c[0]), max(b[-1], c[-1]) + 1):
                if label[i] not in (k, j) or label[i] == prev:
                    continue
                prev = label[i]
                runs += 1
                if 4 <= runs:
                    return False
    return True


_NC_CACHE = {0: ((),)}
_NC_LOCK = threading.Lock()


def _shift(partition, offset):
    return tuple(tuple(i + offset for i in b) for b in partition)


def _nc_relative(n):
    """Non-crossing partitions of {1..n} as tuples of blocks (cached)."""
    if n in _NC_CACHE:
        return _NC_CACHE[n]
    for k in range(1, n):
        _nc_relative(k)
    out = []

    def extend(block, start, acc):
        # start: first element not yet assigned, all after the block
        tails = _NC_CACHE[n - start + 1]
        for head in acc:
            for tail in tails:
                out.append(head + (tuple(block),) + _shift(tail, start - 1))
        for j in range(start, n + 1):
            gap = _NC_CACHE[j - start]
            acc2 = [head + _shift(g, start - 1) for head in acc for g in gap]
            extend(block + [j], j + 1, acc2)
        return

    extend([1], 2, [()])
    assert len(out) == catalan(n), (n, len(out))
    _NC_CACHE[n] = tuple(out)
    return _NC_CACHE[n]


def enumerate_nc(n):
    """All non-crossing partitions of {1..n}; there are Catalan(n) of them."""
    n = _check_order(n)
    with _NC_LOCK:
        partitions = _nc_relative(n)
    log.debug('enumerated %d non-crossing partitions of %d', len(partitions),
              n)
    return [SetPartition._trusted(blocks, n) for blocks in partitions]


class _Sequence(object):

    prefix = ''

    def __init__(self, values):
        self.values = np.array(values, dtype=float)
        self._validate()
        return

    def _validate(self):
        if self.values.ndim != 1 or len(self.values) < 1:
            raise SeriesLengthError('a sequence needs at least one term')
        if not np.all(np.isfinite(self.values)):
            raise ValueError('non-finite term in %r' % (self.values,))
        return

    @property
    def order(self):
        return len(self.values)

    def __getitem__(self, k):
        """1-based access: seq[1] is the first term."""
        if not 1 <= k <= self.order:
            raise SeriesLengthError('term %d outside 1..%d'
                                    % (k, self.order))
        return float(self.values[k - 1])

    def __repr__(self):
        head = ' '.join('%s%d=%.6g' % (self.prefix, i, v)
                        for (i, v) in enumerate(self.values[:4], 1))
        return '<%s order=%d %s>' % (self.__class__.__name__, self.order,
                                     head)


class MomentSequence(_Sequence):

    prefix = 'm'

    def moment(self, k):
        if k == 0:
            return 1.0
        return self[k]

    def series(self):
        """Coefficients 1, m1, ..., m_order of the generating function."""
        return np.concatenate([[1.0], self.values])


class CumulantSequence(_Sequence):

    prefix = 'R'


class MixedInverseCumulants(_Sequence):

    prefix = 'C'


def moments_from_cumulants(r, n):
    """Moments m1..mn from free cumulants R1..Rn.

    The block of the first element having size s, the remaining k-s
    elements split into s gaps that are partitioned independently, so
    m_k = sum_s R_s [z^(k-s)] M(z)^s where M(z) = sum_{j>=0} m_j z^j
    and m_0 = 1.
    """
    assert isinstance(r, CumulantSequence), str(type(r))
    n = _check_order(n)
    if r.order < n:
        raise SeriesLengthError('need %d cumulants, got %d' % (n, r.order))
    m = np.zeros(n + 1)
    m[0] = 1.0
    for k in range(1, n + 1):
        total = 0.0
        power = np.zeros(k)
        power[0] = 1.0
        for s in range(1, k + 1):
            power = poly_mul(power, m[:k], k - 1)
            total += r.values[s - 1] * power[k - s]
        m[k] = total
    return MomentSequence(m[1:])


def cumulants_from_moments(m, n):
    """Free cumulants R1..Rn from moments m1..mn."""
    assert isinstance(m, MomentSequence), str(type(m))
    n = _check_order(n)
    if m.order < n:
        raise SeriesLengthError('need %d moments, got %d' % (n, m.order))
    series = m.series()[:n + 1]
    r = np.zeros(n)
    for k in range(1, n + 1):
        total = series[k]
        power = np.zeros(k)
        power[0] = 1.0
        for s in range(1, k):
            power = poly_mul(power, series[:k], k - 1)
            total -= r[s - 1] * power[k - s]
        r[k - 1] = total
    return CumulantSequence(r)


def mixed_cumulant_oracle(joint, n):
    """R_n(V^-1, V, ..., V) by brute force over non-crossing partitions.

    `joint` receives a word, a tuple of INVERSE/DIRECT letters, and returns
    the state of the corresponding product.  Lower cumulants are solved
    from the moment-cumulant relation of each sub-word and memoized.
    """
    n = _check_order(n)
    memo = {}

    def kappa(word):
        if word in memo:
            return memo[word]
        value = float(joint(word))
        if 1 < len(word):
            for p in enumerate_nc(len(word)):
                if len(p.blocks) == 1:
                    continue
                prod = 1.0
                for block in p.blocks:
                    prod *= kappa(tuple(word[i - 1] for i in block))
                value -= prod
        memo[word] = value
        return value

    return kappa((INVERSE,) + (DIRECT,) * (n - 1))


def mixed_inverse_cumulants(c1, r, order):
    """C1..C_order from the series identity C(z)(1 + z r(z)) = z + C1."""
    assert isinstance(r, CumulantSequence), str(type(r))
    if order < 1:
        raise ValueError('order must be positive: %r' % (order,))
    if r.order + 1 < order:
        raise SeriesLengthError('order %d needs %d cumulants, got %d'
                                % (order, order - 1, r.order))
    c = np.zeros(order)
    c[0] = c1
    for k in range(2, order + 1):
        value = 1.0 if k == 2 else 0.0
        for i in range(1, k):
            value -= c[i - 1] * r.values[k - i - 1]
        c[k - 1] = value
    return MixedInverseCumulants(c)


def bls_expand(mixed, m, n):
    """beta_n = sum_i C_i [z^(n+1-i)] A(z)^i, the n-th coefficient of
    A(z) C(z A(z)) with A(z) = 1 + sum_k m_k z^k."""
    assert isinstance(mixed, MixedInverseCumulants), str(type(mixed))
    assert isinstance(m, MomentSequence), str(type(m))
    if n < 0:
        raise ValueError('n must be nonnegative: %r' % (n,))
    if mixed.order < n + 1 or (0 < n and m.order < n):
        raise SeriesLengthError('bls_expand(%d) needs %d mixed cumulants '
                                'and %d moments' % (n, n + 1, n))
    series = m.series()[:n + 1]
    total = 0.0
    power = np.zeros(n + 1)
    power[0] = 1.0
    for i in range(1, n + 2):
        power = poly_mul(power, series, n)
        total += mixed.values[i - 1] * power[n + 1 - i]
    return total
