import math

import numpy as np

from pragmatic.errors import InvalidDistributionError, ZeroPriorError, DimensionMismatchError, \
    InvalidParameterError
from pragmatic.utils import fsum

# absolute tolerance on the sum of a probability vector, anything within it is renormalised
TOLERANCE = 1e-9


def as_probabilities(values, tolerance=TOLERANCE):
    """
    Validates the given values as a probability distribution and returns them as a read-only
    float numpy array with the same shape, renormalised so that they sum to 1. The values can be
    of any shape, the whole array is treated as one distribution.

    :param values: a sequence, nested sequence or array of numbers
    :param tolerance: how far the sum may be from 1 before we reject the values
    :return: a read-only numpy array
    """
    try:
        array = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise InvalidDistributionError('values are not numbers', values)
    if array.size == 0:
        raise InvalidDistributionError('no outcomes', values)
    if not np.all(np.isfinite(array)):
        raise InvalidDistributionError('non-finite entry', values)
    if np.any(array < 0):
        raise InvalidDistributionError('negative entry', values)
    total = fsum(array)
    if abs(total - 1) > tolerance:
        raise InvalidDistributionError(f'entries sum to {total!r}, not 1', values)
    array = array / total
    array.setflags(write=False)
    return array


class Dist:
    """
    A finite discrete probability distribution over an outcome space of N outcomes. Instances are
    immutable.
    """

    def __init__(self, probs):
        """
        :param probs: the probabilities, they must be non-negative and sum to 1 (within 1e-9)
        """
        probs = as_probabilities(probs)
        if probs.ndim != 1:
            raise InvalidDistributionError(f'expected a vector, got shape {probs.shape}', probs)
        self._probs = probs

    @classmethod
    def from_weights(cls, weights):
        """
        Creates a new distribution by normalising the given non-negative weights.

        :param weights: non-negative numbers, at least one of which is positive
        :return: a new instance of this class
        """
        weights = np.array(weights, dtype=float)
        if weights.size == 0 or np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise InvalidDistributionError('weights must be finite and non-negative', weights)
        total = fsum(weights)
        if total <= 0:
            raise InvalidDistributionError('weights sum to zero', weights)
        return cls(weights / total)

    @classmethod
    def unit(cls, n, k):
        """
        The unit vector u_k, i.e. certainty in outcome k.
        """
        probs = np.zeros(n)
        probs[k] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))

    @property
    def probs(self):
        return self._probs

    @property
    def n(self):
        return self._probs.size

    @property
    def support(self):
        """
        Boolean mask of the outcomes with positive probability.
        """
        return self._probs > 0

    def isclose(self, other, tolerance=TOLERANCE):
        """
        Checks whether this distribution equals the other, entry by entry, within the tolerance.
        """
        other = as_dist(other)
        return self.n == other.n and bool(np.all(np.abs(self._probs - other.probs) < tolerance))

    def to_list(self):
        return self._probs.tolist()

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self._probs.tolist())

    def __getitem__(self, index):
        return float(self._probs[index])

    def __repr__(self):
        return f'{type(self).__name__}({self.to_list()})'


class Prior(Dist):
    """
    A distribution used as a decision maker's a priori beliefs. Every entry must be strictly
    positive.
    """

    def __init__(self, probs):
        super().__init__(probs)
        for index, value in enumerate(self._probs):
            if value <= 0:
                raise ZeroPriorError(index, float(value))


def as_dist(value):
    """
    Returns the given value as a Dist, building one if it's a plain sequence.
    """
    return value if isinstance(value, Dist) else Dist(value)


def as_prior(value):
    """
    Returns the given value as a Prior, building one if it's a plain sequence or a Dist.
    """
    if isinstance(value, Prior):
        return value
    return Prior(value.probs if isinstance(value, Dist) else value)


def check_dimensions(what, expected, actual):
    if expected != actual:
        raise DimensionMismatchError(what, expected, actual)


def kl_divergence(p, q):
    """
    The Kullback-Leibler divergence D(p||q) in bits. Terms where p_i = 0 contribute exactly 0 and
    are never evaluated.

    :param p: the posterior Dist
    :param q: the Prior (a plain Dist or sequence is converted and must be strictly positive)
    :return: the divergence, a non-negative float
    """
    p = as_dist(p)
    q = as_prior(q)
    check_dimensions('divergence', q.n, p.n)
    support = p.support
    terms = p.probs[support] * np.log2(p.probs[support] / q.probs[support])
    return max(0.0, fsum(terms))


def shannon_entropy(p):
    """
    The Shannon entropy H(p) = -sum p_i log2 p_i in bits, with 0 log 0 = 0.
    """
    p = as_dist(p)
    support = p.probs[p.support]
    return min(max(0.0, -fsum(support * np.log2(support))), math.log2(p.n))


def convex_mix(a, b, weight):
    """
    The interpolated distribution weight * a + (1 - weight) * b. If both a and b are priors the
    result is a prior too.

    :param a: a Dist
    :param b: a Dist of the same dimension
    :param weight: the interpolation weight, in [0, 1]
    :return: a Dist (or Prior)
    """
    a = as_dist(a)
    b = as_dist(b)
    check_dimensions('interpolation', a.n, b.n)
    if not 0 <= weight <= 1:
        raise InvalidParameterError('lambda', weight, 'in [0, 1]')
    cls = Prior if isinstance(a, Prior) and isinstance(b, Prior) else Dist
    return cls(weight * a.probs + (1 - weight) * b.probs)
