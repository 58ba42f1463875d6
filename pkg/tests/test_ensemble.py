import math

import numpy as np
import pytest
from hypothesis import given

from pragmatic.dist import Dist, Prior
from pragmatic.ensemble import MessageEnsemble, UsefulnessLabel, ensemble_pragmatic_info, \
    pragmatic_info_single, per_message_info, decompose, marginal_posterior, mutual_information, \
    is_pragmatically_definitive, definitive_upper_bound, definitive_phi, partition_pragmatic_info
from pragmatic.errors import DimensionMismatchError, NotDefinitiveError, MissingLabelError, \
    ZeroPriorError
from pragmatic.resources import Fixture, load_fixture
from tests.strategies import ensembles, labelled_ensembles


class TestMessageEnsemble:

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            MessageEnsemble([0.5, 0.5], [1], [[0.2, 0.3, 0.5]])

    def test_message_count_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            MessageEnsemble([0.5, 0.5], [0.5, 0.5], [[1, 0]])

    def test_zero_prior(self):
        with pytest.raises(ZeroPriorError):
            MessageEnsemble([1, 0], [1], [[1, 0]])

    def test_default_labels(self):
        e = MessageEnsemble([0.5, 0.5], [0.5, 0.5], [[1, 0], [0, 1]])
        assert e.labels == ('0', '1')

    def test_joint(self):
        e = MessageEnsemble([0.5, 0.5], [0.75, 0.25], [[1, 0], [0.5, 0.5]])
        assert np.allclose(e.joint, [[0.75, 0], [0.125, 0.125]])

    def test_definitive(self):
        e = MessageEnsemble.definitive([0.25, 0.75], [1, 0], [0.5, 0.5])
        assert e.posteriors[0].to_list() == [0, 1]
        assert e.posteriors[1].to_list() == [1, 0]


class TestPragmaticInfo:

    def test_single_message(self):
        assert pragmatic_info_single([1, 0], [0.25, 0.75]) == pytest.approx(2, abs=1e-12)

    def test_boolean_delta_prime(self, boolean_delta_prime):
        assert ensemble_pragmatic_info(boolean_delta_prime) == pytest.approx(0.75, abs=1e-12)
        assert per_message_info(boolean_delta_prime) == pytest.approx([1, 0], abs=1e-12)

    def test_boolean_delta(self):
        e = load_fixture(Fixture.BOOLEAN_DELTA)
        assert ensemble_pragmatic_info(e) == pytest.approx(1, abs=1e-12)

    def test_bandit_first_play(self):
        e = load_fixture(Fixture.BANDIT_T0)
        assert ensemble_pragmatic_info(e) == pytest.approx(0.0817041659455, abs=1e-12)

    def test_nothing_learnt(self):
        prior = Prior([0.2, 0.3, 0.5])
        e = MessageEnsemble(prior, [0.4, 0.6], [prior, prior])
        assert ensemble_pragmatic_info(e) == 0
        report = decompose(e)
        assert report.mutual_info == pytest.approx(0, abs=1e-12)
        assert report.prior_update == pytest.approx(0, abs=1e-12)

    @given(ensembles())
    def test_non_negative(self, e):
        assert ensemble_pragmatic_info(e) >= 0

    @given(ensembles())
    def test_upper_bound(self, e):
        assert ensemble_pragmatic_info(e) <= definitive_upper_bound(e.prior) + 1e-12

    @given(ensembles())
    def test_matches_per_message_average(self, e):
        expected = math.fsum(e.message_probs.probs * per_message_info(e))
        assert ensemble_pragmatic_info(e) == pytest.approx(expected, abs=1e-12)


class TestDecomposition:

    def test_boolean_delta_prime(self, boolean_delta_prime):
        report = decompose(boolean_delta_prime)
        assert report.marginal_posterior.isclose([0.875, 0.125])
        assert report.prior_update == pytest.approx(0.875 * math.log2(1.75) - 0.25, abs=1e-12)
        assert report.mutual_info == pytest.approx(0.75 - report.prior_update, abs=1e-12)
        assert report.residual == pytest.approx(0, abs=1e-12)

    def test_prior_equal_to_average_posterior(self):
        posteriors = [Dist([0.6, 0.4]), Dist([0.2, 0.8])]
        e = MessageEnsemble([0.4, 0.6], [0.5, 0.5], posteriors)
        report = decompose(e)
        assert report.prior_update == pytest.approx(0, abs=1e-12)
        assert report.phi == pytest.approx(report.mutual_info, abs=1e-10)

    def test_marginal_posterior(self):
        e = MessageEnsemble([0.5, 0.5], [0.5, 0.5], [[1, 0], [0.5, 0.5]])
        assert marginal_posterior(e).isclose([0.75, 0.25])

    @given(ensembles())
    def test_identity(self, e):
        report = decompose(e)
        assert abs(report.residual) < 1e-10
        assert report.phi >= mutual_information(e) - 1e-10


class TestDefinitive:

    def test_flags(self, boolean_delta_prime):
        definitiveness = is_pragmatically_definitive(boolean_delta_prime)
        assert definitiveness.messages == (True, False)
        assert definitiveness.targets == (0, None)
        assert not definitiveness.ensemble

    def test_upper_bound(self):
        assert definitive_upper_bound([0.25, 0.75]) == pytest.approx(2, abs=1e-12)
        assert definitive_upper_bound([0.5, 0.5]) == pytest.approx(1, abs=1e-12)

    def test_upper_bound_is_reached(self):
        prior = Prior([0.1, 0.3, 0.6])
        e = MessageEnsemble.definitive(prior, [0], [1])
        assert ensemble_pragmatic_info(e) == pytest.approx(definitive_upper_bound(prior),
                                                           abs=1e-12)

    def test_closed_form(self):
        e = MessageEnsemble.definitive([0.25, 0.75], [0, 1], [0.5, 0.5])
        expected = 0.5 * 2 + 0.5 * math.log2(4 / 3)
        assert definitive_phi(e) == pytest.approx(expected, abs=1e-12)
        assert ensemble_pragmatic_info(e) == pytest.approx(expected, abs=1e-12)

    def test_closed_form_needs_definitive(self, boolean_delta_prime):
        with pytest.raises(NotDefinitiveError) as e:
            definitive_phi(boolean_delta_prime)
        assert e.value.messages == ['1']


class TestPartition:

    def test_boolean_delta_prime(self, boolean_delta_prime):
        parts = partition_pragmatic_info(boolean_delta_prime, ['useful', 'irrelevant'])
        assert parts.useful == pytest.approx(0.75, abs=1e-12)
        assert parts.irrelevant == 0
        assert parts.disinformative == 0
        assert parts[UsefulnessLabel.USEFUL] == parts.useful

    def test_keyed_by_label(self, boolean_delta_prime):
        parts = partition_pragmatic_info(boolean_delta_prime,
                                         {'0': UsefulnessLabel.DISINFORMATIVE, 1: 'useful'})
        assert parts.disinformative == pytest.approx(0.75, abs=1e-12)

    def test_all_useful(self, boolean_delta_prime):
        parts = partition_pragmatic_info(boolean_delta_prime, ['useful'] * 2)
        assert (parts.irrelevant, parts.disinformative) == (0, 0)
        assert parts.useful == pytest.approx(ensemble_pragmatic_info(boolean_delta_prime),
                                             abs=1e-12)

    def test_nothing_to_partition(self):
        prior = Prior([0.5, 0.5])
        e = MessageEnsemble(prior, [0.5, 0.5], [prior, prior])
        parts = partition_pragmatic_info(e, ['useful', 'disinformative'])
        assert parts.total == 0

    def test_missing_label(self, boolean_delta_prime):
        with pytest.raises(MissingLabelError) as e:
            partition_pragmatic_info(boolean_delta_prime, {0: 'useful'})
        assert e.value.messages == ['1']

    def test_too_many_labels(self, boolean_delta_prime):
        with pytest.raises(DimensionMismatchError):
            partition_pragmatic_info(boolean_delta_prime, ['useful'] * 3)

    @given(labelled_ensembles())
    def test_sums_to_total(self, labelled):
        e, labels = labelled
        parts = partition_pragmatic_info(e, labels)
        phi = ensemble_pragmatic_info(e)
        assert parts.total == pytest.approx(phi, abs=1e-12)
        for part in (parts.irrelevant, parts.disinformative, parts.useful):
            assert 0 <= part <= phi + 1e-12
