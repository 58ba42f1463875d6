import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pragmatic.dist import Dist, Prior, as_probabilities, as_prior, kl_divergence, \
    shannon_entropy, convex_mix
from pragmatic.errors import InvalidDistributionError, ZeroPriorError, DimensionMismatchError, \
    InvalidParameterError
from tests.strategies import dist_prior_pairs, dists, priors, dims


class TestAsProbabilities:

    def test_renormalises_within_tolerance(self):
        probs = as_probabilities([0.5, 0.5 + 5e-10])
        assert math.fsum(probs) == pytest.approx(1, abs=1e-15)

    @pytest.mark.parametrize('values', [[0.5, 0.6], [1.5, -0.5], [float('nan'), 1], [], ['a']])
    def test_rejects(self, values):
        with pytest.raises(InvalidDistributionError):
            as_probabilities(values)

    def test_is_read_only(self):
        with pytest.raises(ValueError):
            Dist([0.5, 0.5]).probs[0] = 1


class TestDist:

    def test_from_weights(self):
        assert Dist.from_weights([1, 3]).to_list() == [0.25, 0.75]

    def test_from_weights_all_zero(self):
        with pytest.raises(InvalidDistributionError):
            Dist.from_weights([0, 0])

    def test_unit(self):
        assert Dist.unit(3, 1).to_list() == [0, 1, 0]

    def test_uniform(self):
        assert Dist.uniform(4).to_list() == [0.25] * 4

    def test_matrix_is_not_a_dist(self):
        with pytest.raises(InvalidDistributionError):
            Dist([[0.5, 0], [0, 0.5]])

    def test_isclose(self):
        assert Dist([0.5, 0.5]).isclose([0.5 + 1e-12, 0.5 - 1e-12])
        assert not Dist([0.5, 0.5]).isclose([0.6, 0.4])
        assert not Dist([0.5, 0.5]).isclose([0.5, 0.25, 0.25])


class TestPrior:

    def test_zero_entry(self):
        with pytest.raises(ZeroPriorError) as e:
            Prior([0.5, 0, 0.5])
        assert e.value.index == 1
        assert e.value.exit_code == 3

    def test_as_prior_from_dist(self):
        prior = as_prior(Dist([0.25, 0.75]))
        assert isinstance(prior, Prior)
        assert prior.to_list() == [0.25, 0.75]


class TestKLDivergence:

    def test_certain_posterior(self):
        assert kl_divergence([1, 0], [0.5, 0.5]) == pytest.approx(1, abs=1e-12)

    def test_equal(self):
        assert kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0

    def test_first_bandit_play(self):
        assert kl_divergence([2 / 3, 1 / 3], [0.5, 0.5]) == pytest.approx(0.0817041659455,
                                                                           abs=1e-12)

    def test_opposite(self):
        assert kl_divergence([0.9, 0.1], [0.1, 0.9]) == pytest.approx(0.8 * math.log2(9),
                                                                       abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            kl_divergence([0.5, 0.5], [0.25, 0.25, 0.5])

    def test_zero_prior(self):
        with pytest.raises(ZeroPriorError):
            kl_divergence([0.5, 0.5], [1, 0])

    @given(dist_prior_pairs())
    def test_non_negative(self, pair):
        p, q = pair
        assert kl_divergence(p, q) >= 0

    @given(dims.flatmap(priors))
    def test_zero_from_itself(self, q):
        assert kl_divergence(q, q) < 1e-12

    @given(dims.flatmap(lambda n: st.tuples(dists(n), dists(n), priors(n), priors(n))),
           st.floats(min_value=0, max_value=1))
    def test_convexity(self, quadruple, weight):
        p1, p2, q1, q2 = quadruple
        mixed = kl_divergence(convex_mix(p1, p2, weight), convex_mix(q1, q2, weight))
        bound = weight * kl_divergence(p1, q1) + (1 - weight) * kl_divergence(p2, q2)
        assert mixed <= bound + 1e-10


class TestEntropy:

    def test_values(self):
        assert shannon_entropy([0.25, 0.75]) == pytest.approx(0.811278124459, abs=1e-12)
        assert shannon_entropy(Dist.uniform(4)) == pytest.approx(2, abs=1e-12)
        assert shannon_entropy([0, 1, 0]) == 0

    @given(dims.flatmap(dists))
    def test_bounds(self, p):
        assert 0 <= shannon_entropy(p) <= math.log2(p.n)


class TestConvexMix:

    def test_mix(self):
        mixed = convex_mix([1, 0], [0, 1], 0.25)
        assert np.allclose(mixed.probs, [0.25, 0.75])
        assert not isinstance(mixed, Prior)

    def test_priors_give_a_prior(self):
        assert isinstance(convex_mix(Prior([0.5, 0.5]), Prior([0.1, 0.9]), 0.5), Prior)

    @pytest.mark.parametrize('weight', [-0.1, 1.1])
    def test_bad_weight(self, weight):
        with pytest.raises(InvalidParameterError):
            convex_mix([1, 0], [0, 1], weight)
