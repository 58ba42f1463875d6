"""
Code lengths for the outcomes of a distribution: the ideal -log2 p lengths, the integer Shannon
code, optimal (Huffman) prefix codes, and the expected extra length paid for coding with the
wrong distribution.
"""
import enum
import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from pragmatic.dist import as_dist, as_prior, check_dimensions
from pragmatic.errors import DegenerateDistributionError
from pragmatic.utils import fsum

# marks an outcome that has zero probability and so is never given a codeword
UNENCODED = None


@enum.unique
class CodeMode(enum.Enum):
    IDEAL = 'ideal'
    INTEGER = 'integer'


@dataclass(frozen=True)
class CodeLengths:
    """
    One codeword length in bits per outcome, UNENCODED for outcomes that never occur.
    """
    lengths: tuple
    integer: bool = False

    @property
    def encoded(self):
        return tuple(length is not UNENCODED for length in self.lengths)

    def kraft_sum(self):
        """
        Sum of 2^-length over the encoded outcomes. A prefix code with these lengths exists iff
        this is at most 1.
        """
        return fsum(2.0 ** -length for length in self.lengths if length is not UNENCODED)

    def expected_length(self, p):
        """
        The expected codeword length when outcomes are drawn from p.

        :param p: a Dist over the same outcomes
        :return: the expected length in bits
        """
        p = as_dist(p)
        check_dimensions('code lengths', len(self.lengths), p.n)
        terms = []
        for probability, length in zip(p, self.lengths):
            if probability == 0:
                continue
            if length is UNENCODED:
                raise DegenerateDistributionError(0)
            terms.append(probability * length)
        return fsum(terms)


def ideal_code_lengths(p):
    """
    The idealised (non-integer) code lengths -log2 p_i. A certain outcome needs 0 bits.
    """
    p = as_dist(p)
    return CodeLengths(tuple(-math.log2(x) if x > 0 else UNENCODED for x in p))


def shannon_code_lengths(p):
    """
    The Shannon code lengths ceil(-log2 p_i). These always satisfy the Kraft inequality and are
    the lengths a code built for p assigns when used to encode samples of another distribution.
    """
    p = as_dist(p)
    return CodeLengths(tuple(math.ceil(-math.log2(x)) if x > 0 else UNENCODED for x in p),
                       integer=True)


def huffman_code_lengths(p):
    """
    The codeword lengths of an optimal binary prefix code for p, built with Huffman's algorithm.
    Equal-weight merges are broken by lowest original index first so the result is deterministic.
    Outcomes with zero probability are left unencoded.

    :param p: a Dist with at least 2 positive entries
    :return: a CodeLengths object
    """
    p = as_dist(p)
    positive = [i for i, x in enumerate(p) if x > 0]
    if len(positive) < 2:
        raise DegenerateDistributionError(len(positive))

    lengths = [UNENCODED] * p.n
    for i in positive:
        lengths[i] = 0
    # each heap entry is (weight, lowest original index in the subtree, outcomes in the subtree)
    heap = [(p[i], i, (i,)) for i in positive]
    heapq.heapify(heap)
    while len(heap) > 1:
        left = heapq.heappop(heap)
        right = heapq.heappop(heap)
        for i in left[2] + right[2]:
            lengths[i] += 1
        heapq.heappush(heap, (left[0] + right[0], min(left[1], right[1]), left[2] + right[2]))
    return CodeLengths(tuple(lengths), integer=True)


def optimal_integer_lengths(p):
    """
    Optimal integer code lengths for p. Unlike huffman_code_lengths this also accepts a
    distribution with a single possible outcome, which needs no bits at all.
    """
    p = as_dist(p)
    if np.count_nonzero(p.support) == 1:
        return CodeLengths(tuple(0 if x > 0 else UNENCODED for x in p), integer=True)
    return huffman_code_lengths(p)


def exhaustive_optimal_length(p):
    """
    The minimum expected length over every binary prefix code for p, found by brute force. Only
    feasible for small outcome spaces; used to check the Huffman construction.

    :param p: a Dist
    :return: the optimal expected length in bits
    """
    p = as_dist(p)
    probs = sorted((x for x in p if x > 0), reverse=True)
    n = len(probs)
    if n == 1:
        return 0.0
    best = math.inf
    # an optimal code never needs a codeword longer than n - 1 and the shortest codewords always go
    # to the likeliest outcomes, so sorted length multisets cover every candidate
    for lengths in itertools.combinations_with_replacement(range(1, n), n):
        if math.fsum(2.0 ** -length for length in lengths) > 1:
            continue
        best = min(best, math.fsum(x * length for x, length in zip(probs, lengths)))
    return best


def expected_codelength_gap(p_m, q, mode=CodeMode.IDEAL):
    """
    The expected number of extra bits, under p_m, paid for coding outcomes with a code built for
    q rather than one built for p_m.

    In ideal mode the code lengths are -log2 and the gap is exactly D(p_m||q). In integer mode the
    q code is the Shannon code and the p_m code is optimal, which puts the gap strictly inside
    (D - 1, D + 1).

    :param p_m: the posterior Dist
    :param q: the Prior
    :param mode: a CodeMode
    :return: the gap in bits
    """
    p_m = as_dist(p_m)
    q = as_prior(q)
    check_dimensions('code length gap', q.n, p_m.n)
    mode = CodeMode(mode)
    if mode == CodeMode.IDEAL:
        wrong = ideal_code_lengths(q).lengths
        right = ideal_code_lengths(p_m).lengths
        return fsum(x * (wrong[i] - right[i]) for i, x in enumerate(p_m) if x > 0)
    wrong = shannon_code_lengths(q)
    right = optimal_integer_lengths(p_m)
    return wrong.expected_length(p_m) - right.expected_length(p_m)
