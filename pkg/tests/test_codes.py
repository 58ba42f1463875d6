import math

import pytest
from hypothesis import given, strategies as st

from pragmatic.codes import CodeLengths, CodeMode, UNENCODED, huffman_code_lengths, \
    shannon_code_lengths, ideal_code_lengths, optimal_integer_lengths, \
    exhaustive_optimal_length, expected_codelength_gap
from pragmatic.dist import Dist, kl_divergence
from pragmatic.errors import DegenerateDistributionError
from tests.strategies import dist_prior_pairs, positive_weights

small_dists = st.integers(min_value=2, max_value=6).flatmap(
    lambda n: st.lists(positive_weights, min_size=n, max_size=n)).map(Dist.from_weights)


class TestHuffman:

    def test_lengths(self):
        lengths = huffman_code_lengths([0.4, 0.3, 0.2, 0.1])
        assert lengths.lengths == (1, 2, 3, 3)
        assert lengths.expected_length([0.4, 0.3, 0.2, 0.1]) == pytest.approx(1.9, abs=1e-12)
        assert lengths.kraft_sum() == 1

    def test_zero_probability_is_unencoded(self):
        lengths = huffman_code_lengths([0.5, 0.5, 0])
        assert lengths.lengths == (1, 1, UNENCODED)
        assert lengths.encoded == (True, True, False)

    def test_ties_are_deterministic(self):
        assert huffman_code_lengths([0.25] * 4).lengths == (2, 2, 2, 2)
        assert huffman_code_lengths([1 / 3] * 3) == huffman_code_lengths([1 / 3] * 3)

    def test_single_outcome(self):
        with pytest.raises(DegenerateDistributionError):
            huffman_code_lengths([1, 0])

    def test_optimal_integer_lengths_single_outcome(self):
        assert optimal_integer_lengths([0, 1]).lengths == (UNENCODED, 0)

    def test_exhaustive(self):
        assert exhaustive_optimal_length([0.4, 0.3, 0.2, 0.1]) == pytest.approx(1.9, abs=1e-12)
        assert exhaustive_optimal_length([1, 0]) == 0

    @given(small_dists)
    def test_matches_exhaustive_search(self, p):
        lengths = huffman_code_lengths(p)
        assert lengths.expected_length(p) == pytest.approx(exhaustive_optimal_length(p),
                                                           abs=1e-12)
        assert lengths.kraft_sum() <= 1


class TestShannonCode:

    def test_lengths(self):
        assert shannon_code_lengths([0.5, 0.25, 0.25]).lengths == (1, 2, 2)
        assert shannon_code_lengths([0.9, 0.05, 0.05]).lengths == (1, 5, 5)

    @given(small_dists)
    def test_kraft(self, p):
        assert shannon_code_lengths(p).kraft_sum() <= 1


class TestCodeLengths:

    def test_ideal(self):
        assert ideal_code_lengths([0.5, 0.25, 0.25, 0]).lengths == (1, 2, 2, UNENCODED)

    def test_expected_length_of_unencoded_outcome(self):
        with pytest.raises(DegenerateDistributionError):
            CodeLengths((1, UNENCODED)).expected_length([0.5, 0.5])


class TestWrongCode:

    def test_ideal(self):
        gap = expected_codelength_gap([0.9, 0.1], [0.1, 0.9], CodeMode.IDEAL)
        assert gap == pytest.approx(0.8 * math.log2(9), abs=1e-12)

    def test_integer_band_with_a_missing_outcome(self):
        p = [0, 0.5, 0.5]
        q = [0.9, 0.05, 0.05]
        divergence = kl_divergence(p, q)
        gap = expected_codelength_gap(p, q, 'integer')
        assert divergence == pytest.approx(math.log2(10), abs=1e-12)
        # a Shannon code for q spends 5 bits on each outcome, the optimal code for p 1 bit
        assert gap == 4
        assert divergence - 1 < gap < divergence + 1

    def test_integer_definitive_posterior(self):
        assert expected_codelength_gap([1, 0], [0.5, 0.5], CodeMode.INTEGER) == 1

    @given(dist_prior_pairs())
    def test_ideal_equals_divergence(self, pair):
        p, q = pair
        assert expected_codelength_gap(p, q) == pytest.approx(kl_divergence(p, q), abs=1e-12)

    @given(dist_prior_pairs())
    def test_integer_within_a_bit(self, pair):
        p, q = pair
        divergence = kl_divergence(p, q)
        gap = expected_codelength_gap(p, q, CodeMode.INTEGER)
        assert divergence - 1 - 1e-12 < gap < divergence + 1 + 1e-12
