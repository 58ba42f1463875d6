import enum
import math
from dataclasses import dataclass

import numpy as np

from pragmatic.dist import Dist, as_dist, as_prior, check_dimensions, kl_divergence, TOLERANCE
from pragmatic.errors import NotDefinitiveError, MissingLabelError, DimensionMismatchError
from pragmatic.utils import fsum


@enum.unique
class UsefulnessLabel(enum.Enum):
    """
    How a message affects its receiver: not at all, for the worse, or for the better. The labels
    are supplied by the caller, they are never inferred.
    """
    IRRELEVANT = 'irrelevant'
    DISINFORMATIVE = 'disinformative'
    USEFUL = 'useful'


class MessageEnsemble:
    """
    A finite set of messages that may be sent to a decision maker, with the probability of each
    message being sent and the decision maker's posterior beliefs after receiving it.
    """

    def __init__(self, prior, message_probs, posteriors, labels=None):
        """
        :param prior: the decision maker's Prior over the N outcomes
        :param message_probs: a Dist over the messages (phi_m)
        :param posteriors: one Dist over the N outcomes per message (p_m)
        :param labels: optional message names, defaults to the message indexes
        """
        self.prior = as_prior(prior)
        self.message_probs = as_dist(message_probs)
        self.posteriors = tuple(as_dist(posterior) for posterior in posteriors)
        check_dimensions('message probabilities', len(self.posteriors), self.message_probs.n)
        for posterior in self.posteriors:
            check_dimensions('posterior', self.prior.n, posterior.n)
        if labels is None:
            labels = [str(m) for m in range(len(self.posteriors))]
        self.labels = tuple(labels)
        check_dimensions('message labels', len(self.posteriors), len(self.labels))

    @classmethod
    def definitive(cls, prior, targets, message_probs):
        """
        Creates a pragmatically definitive ensemble where message m makes the decision maker
        certain of outcome targets[m].
        """
        prior = as_prior(prior)
        return cls(prior, message_probs, [Dist.unit(prior.n, k) for k in targets])

    @property
    def n_messages(self):
        return len(self.posteriors)

    @property
    def n_outcomes(self):
        return self.prior.n

    @property
    def posterior_matrix(self):
        """
        The posteriors as a (messages x outcomes) array.
        """
        return np.vstack([posterior.probs for posterior in self.posteriors])

    @property
    def joint(self):
        """
        The joint probabilities p_{i,m} = phi_m p_{i|m} as a (messages x outcomes) array.
        """
        return self.message_probs.probs[:, np.newaxis] * self.posterior_matrix

    def __repr__(self):
        return (f'MessageEnsemble(prior={self.prior.to_list()}, '
                f'message_probs={self.message_probs.to_list()}, labels={list(self.labels)})')


@dataclass(frozen=True)
class DecompositionReport:
    """
    An ensemble's pragmatic information split into the mutual information between messages and
    outcomes and the divergence of the averaged posterior from the prior.
    """
    phi: float
    mutual_info: float
    prior_update: float
    marginal_posterior: Dist

    @property
    def residual(self):
        return self.phi - self.mutual_info - self.prior_update


@dataclass(frozen=True)
class Definitiveness:
    """
    Which messages of an ensemble are pragmatically definitive. targets holds the outcome each
    definitive message makes certain, None for the others.
    """
    messages: tuple
    targets: tuple

    @property
    def ensemble(self):
        return all(self.messages)


@dataclass(frozen=True)
class PartitionReport:
    irrelevant: float
    disinformative: float
    useful: float

    @property
    def total(self):
        return fsum([self.irrelevant, self.disinformative, self.useful])

    def __getitem__(self, label):
        return getattr(self, UsefulnessLabel(label).value)


def pragmatic_info_single(posterior, prior):
    """
    The pragmatic information of a single message: the divergence of the posterior it produces from
    the prior, in bits.
    """
    return kl_divergence(posterior, prior)


def _ensemble_terms(e):
    # phi_m p_{i|m} log2(p_{i|m} / q_i) for every (m, i) with p_{i,m} > 0
    joint = e.joint
    posteriors = e.posterior_matrix
    support = joint > 0
    ratio = posteriors[support] / np.broadcast_to(e.prior.probs, joint.shape)[support]
    terms = np.zeros_like(joint)
    terms[support] = joint[support] * np.log2(ratio)
    return terms


def per_message_info(e):
    """
    The pragmatic information of each message of the ensemble on its own, D(p_m||q).

    :param e: a MessageEnsemble
    :return: a numpy array with one entry per message
    """
    return np.array([pragmatic_info_single(posterior, e.prior) for posterior in e.posteriors])


def ensemble_pragmatic_info(e):
    """
    The pragmatic information of an ensemble of messages: the expected divergence of the posterior
    from the prior when messages are drawn with probabilities phi_m.

    :param e: a MessageEnsemble
    :return: the pragmatic information in bits
    """
    return max(0.0, fsum(_ensemble_terms(e)))


def marginal_posterior(e):
    """
    The posterior averaged over the messages, p_i = sum_m phi_m p_{i|m}.
    """
    return Dist(np.array([fsum(column) for column in e.joint.T]))


def mutual_information(e):
    """
    The mutual information between the messages and the outcomes, in bits.
    """
    joint = e.joint
    average = marginal_posterior(e).probs
    support = joint > 0
    ratio = e.posterior_matrix[support] / np.broadcast_to(average, joint.shape)[support]
    return max(0.0, fsum(joint[support] * np.log2(ratio)))


def decompose(e):
    """
    Splits the ensemble's pragmatic information into the mutual information between messages and
    outcomes plus the divergence of the averaged posterior from the prior.

    :param e: a MessageEnsemble
    :return: a DecompositionReport
    """
    average = marginal_posterior(e)
    return DecompositionReport(
        phi=ensemble_pragmatic_info(e),
        mutual_info=mutual_information(e),
        prior_update=kl_divergence(average, e.prior),
        marginal_posterior=average,
    )


def is_pragmatically_definitive(e, tolerance=TOLERANCE):
    """
    Works out which messages are pragmatically definitive, i.e. leave the decision maker certain of
    one outcome. The ensemble is definitive if all of its messages are.

    :param e: a MessageEnsemble
    :param tolerance: how close to 1 the largest posterior entry must be
    :return: a Definitiveness object
    """
    messages = []
    targets = []
    for posterior in e.posteriors:
        k = int(np.argmax(posterior.probs))
        definitive = abs(posterior.probs[k] - 1) < tolerance
        messages.append(definitive)
        targets.append(k if definitive else None)
    return Definitiveness(tuple(messages), tuple(targets))


def definitive_upper_bound(prior):
    """
    The largest pragmatic information any message (or ensemble) can carry for this prior, reached by
    a message making the least expected outcome certain: max_i -log2 q_i.
    """
    prior = as_prior(prior)
    return float(np.max(-np.log2(prior.probs)))


def definitive_phi(e):
    """
    The pragmatic information of a pragmatically definitive ensemble in closed form,
    -sum_m phi_m log2 q_k(m).

    :param e: a definitive MessageEnsemble
    :return: the pragmatic information in bits
    """
    definitiveness = is_pragmatically_definitive(e)
    if not definitiveness.ensemble:
        raise NotDefinitiveError([label for label, flag in zip(e.labels, definitiveness.messages)
                                  if not flag])
    return fsum(-phi * math.log2(e.prior[k])
                for phi, k in zip(e.message_probs, definitiveness.targets))


def partition_pragmatic_info(e, labels):
    """
    Splits the ensemble's pragmatic information by the usefulness of its messages. The three parts
    sum to the ensemble's pragmatic information.

    :param e: a MessageEnsemble
    :param labels: a UsefulnessLabel (or its string value) per message, either as a sequence in
                   message order or a dict keyed by message index or message label
    :return: a PartitionReport
    """
    if isinstance(labels, dict):
        resolved = [labels.get(m, labels.get(label)) for m, label in enumerate(e.labels)]
    else:
        resolved = list(labels)
        if len(resolved) > e.n_messages:
            raise DimensionMismatchError('usefulness labels', e.n_messages, len(resolved))
        resolved += [None] * (e.n_messages - len(resolved))
    missing = [label for label, usefulness in zip(e.labels, resolved) if usefulness is None]
    if missing:
        raise MissingLabelError(missing)

    per_message = [fsum(row) for row in _ensemble_terms(e)]
    parts = {label: [] for label in UsefulnessLabel}
    for usefulness, amount in zip(resolved, per_message):
        parts[UsefulnessLabel(usefulness)].append(amount)
    return PartitionReport(**{label.value: max(0.0, fsum(amounts))
                              for label, amounts in parts.items()})
