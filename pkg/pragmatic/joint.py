import enum
from dataclasses import dataclass

import numpy as np

from pragmatic.dist import as_probabilities, TOLERANCE
from pragmatic.ensemble import MessageEnsemble, ensemble_pragmatic_info
from pragmatic.errors import ZeroPriorError, DimensionMismatchError, InvalidDistributionError
from pragmatic.utils import fsum

# tolerance on the additivity identity, which compares sums of logarithms rather than entries
IDENTITY_TOLERANCE = 1e-10


class JointEnsemble:
    """
    Two decision makers, Delta and Delta', receiving messages m and m' (drawn jointly) that update
    their joint beliefs about the outcomes omega and omega'.

    Shapes, with N/N' the outcome counts and M/M' the message counts:
        - joint_prior: (N, N'), strictly positive, q_{i,i'}
        - message_probs: (M, M'), phi_{m,m'}
        - posteriors: (M, M', N, N'), p_{i,i'|m,m'}
    """

    def __init__(self, joint_prior, message_probs, posteriors):
        self.joint_prior = as_probabilities(joint_prior)
        self.message_probs = as_probabilities(message_probs)
        if self.joint_prior.ndim != 2 or self.message_probs.ndim != 2:
            raise InvalidDistributionError('joint prior and message probabilities must be matrices')
        for index in zip(*np.nonzero(self.joint_prior <= 0)):
            raise ZeroPriorError(tuple(map(int, index)), float(self.joint_prior[index]))

        posteriors = np.array(posteriors, dtype=float)
        shape = self.message_probs.shape + self.joint_prior.shape
        if posteriors.shape != shape:
            raise DimensionMismatchError('joint posteriors', shape, posteriors.shape)
        normalised = np.empty(shape)
        for m, m_prime in np.ndindex(*self.message_probs.shape):
            normalised[m, m_prime] = as_probabilities(posteriors[m, m_prime])
        normalised.setflags(write=False)
        self.posteriors = normalised

    @classmethod
    def from_mapping(cls, joint_prior, message_probs, posteriors):
        """
        Creates a joint ensemble from posteriors given as a dict keyed on (m, m') tuples. Pairs of
        messages that are never sent may be left out, they get the joint prior as their posterior.
        """
        joint_prior = np.asarray(joint_prior, dtype=float)
        message_probs = np.asarray(message_probs, dtype=float)
        full = np.empty(message_probs.shape + joint_prior.shape)
        for m, m_prime in np.ndindex(*message_probs.shape):
            full[m, m_prime] = posteriors.get((m, m_prime), joint_prior)
        return cls(joint_prior, message_probs, full)

    @classmethod
    def product(cls, delta, delta_prime):
        """
        Combines two independent message ensembles (for Delta and Delta') into a joint ensemble in
        which everything factorises.

        :param delta: Delta's MessageEnsemble
        :param delta_prime: Delta''s MessageEnsemble
        :return: a JointEnsemble
        """
        joint_prior = np.outer(delta.prior.probs, delta_prime.prior.probs)
        message_probs = np.outer(delta.message_probs.probs, delta_prime.message_probs.probs)
        posteriors = np.einsum('ai,bj->abij', delta.posterior_matrix, delta_prime.posterior_matrix)
        return cls(joint_prior, message_probs, posteriors)

    @property
    def shape(self):
        """
        (M, M', N, N')
        """
        return self.posteriors.shape

    @property
    def joint(self):
        """
        p_{i,i',m,m'} = phi_{m,m'} p_{i,i'|m,m'}, indexed [m, m', i, i'].
        """
        return self.message_probs[:, :, np.newaxis, np.newaxis] * self.posteriors

    def __repr__(self):
        return f'JointEnsemble(shape={self.shape})'


def _divergence_terms(weights, numerator, denominator):
    # weights * log2(numerator / denominator) over the entries where the weight is positive
    support = weights > 0
    return weights[support] * np.log2(numerator[support] / denominator[support])


def joint_pragmatic_info(j):
    """
    The joint pragmatic information of both message ensembles acting on both decision makers.

    :param j: a JointEnsemble
    :return: bits
    """
    prior = np.broadcast_to(j.joint_prior, j.shape)
    return max(0.0, fsum(_divergence_terms(j.joint, j.posteriors, prior)))


def conditional_pragmatic_info(j):
    """
    The pragmatic information of the m' messages acting on Delta', given Delta's message and
    outcome. Both conditionals are derived from the joint distributions; outcomes of Delta that have
    zero posterior probability contribute nothing.

    :param j: a JointEnsemble
    :return: bits
    """
    prior_conditional = j.joint_prior / j.joint_prior.sum(axis=1, keepdims=True)
    delta_marginal = j.posteriors.sum(axis=3, keepdims=True)
    with np.errstate(divide='ignore', invalid='ignore'):
        posterior_conditional = np.where(delta_marginal > 0, j.posteriors / delta_marginal, 0.0)
    prior = np.broadcast_to(prior_conditional, j.shape)
    return max(0.0, fsum(_divergence_terms(j.joint, posterior_conditional, prior)))


def _marginal_ensemble(j, axis):
    # axis 0 keeps Delta's side (messages m, outcomes i), axis 1 keeps Delta''s side
    message_axis = 1 - axis
    outcome_axis = 3 - axis
    prior = j.joint_prior.sum(axis=1 - axis)
    message_probs = j.message_probs.sum(axis=message_axis)
    # posteriors marginalised over the other outcome: (M, M', N) or (M, M', N')
    outcome_marginals = j.posteriors.sum(axis=outcome_axis)
    weighted = j.message_probs[:, :, np.newaxis] * outcome_marginals
    mixtures = weighted.sum(axis=message_axis)
    posteriors = []
    for phi, mixture in zip(message_probs, mixtures):
        posteriors.append(mixture / phi if phi > 0 else prior)
    return MessageEnsemble(prior / prior.sum(), message_probs / message_probs.sum(), posteriors)


def delta_ensemble(j):
    """
    Delta's own message ensemble: messages m with phi_m = sum_m' phi_{m,m'} and posteriors over
    omega averaged over m'.
    """
    return _marginal_ensemble(j, 0)


def delta_prime_ensemble(j):
    """
    Delta''s own message ensemble: messages m' with phi_m' = sum_m phi_{m,m'} and posteriors over
    omega' averaged over m.
    """
    return _marginal_ensemble(j, 1)


def marginal_phi_delta(j):
    return ensemble_pragmatic_info(delta_ensemble(j))


def marginal_phi_delta_prime(j):
    return ensemble_pragmatic_info(delta_prime_ensemble(j))


def cross_message_information(j):
    """
    What the m' messages tell Delta about omega on top of what m already told it: the expected
    divergence of Delta's posterior given (m, m') from its posterior given m alone. This is zero
    exactly when each m only acts on Delta, which is the chain rule's hypothesis.

    :param j: a JointEnsemble
    :return: bits
    """
    by_pair = j.posteriors.sum(axis=3)
    by_message = np.array(delta_ensemble(j).posterior_matrix)
    by_message = np.broadcast_to(by_message[:, np.newaxis, :], by_pair.shape)
    weights = j.message_probs[:, :, np.newaxis] * by_pair
    return max(0.0, fsum(_divergence_terms(weights, by_pair, by_message)))


def chain_rule_residual(j):
    """
    joint - marginal(Delta) - conditional(Delta' | Delta). Zero whenever each m only acts on Delta;
    in general it equals cross_message_information(j).
    """
    return joint_pragmatic_info(j) - marginal_phi_delta(j) - conditional_pragmatic_info(j)


@enum.unique
class Independence(enum.Enum):
    BOTH = 'both'
    ADDITIVE = 'additive'
    # the sufficient condition holding without additivity would contradict the additivity corollary
    SUFFICIENT = 'holds_by_sufficient_condition'
    NEITHER = 'neither'


@dataclass(frozen=True)
class IndependenceReport:
    """
    sufficient: the factorisation condition on the priors and the joint probabilities holds
    additive: the joint pragmatic information is the sum of the two marginal ones
    gap: joint - marginal(Delta) - marginal(Delta')
    """
    sufficient: bool
    additive: bool
    gap: float

    @property
    def verdict(self):
        if self.sufficient and self.additive:
            return Independence.BOTH
        if self.additive:
            return Independence.ADDITIVE
        if self.sufficient:
            return Independence.SUFFICIENT
        return Independence.NEITHER

    @property
    def consistent(self):
        return self.additive or not self.sufficient


def check_pragmatic_independence(j, tolerance=TOLERANCE, identity_tolerance=IDENTITY_TOLERANCE):
    """
    Tests whether the two message ensembles are pragmatically independent, both by the sufficient
    factorisation condition and by checking additivity directly.

    :param j: a JointEnsemble
    :param tolerance: per entry tolerance on the factorisation condition
    :param identity_tolerance: tolerance on the additivity identity
    :return: an IndependenceReport
    """
    prior_conditional = j.joint_prior / j.joint_prior.sum(axis=1, keepdims=True)
    prior_prime = j.joint_prior.sum(axis=0)
    priors_factorise = np.all(np.abs(prior_conditional - prior_prime) < tolerance)

    joint = j.joint
    delta_joint = joint.sum(axis=(1, 3))
    delta_prime_joint = joint.sum(axis=(0, 2))
    product = np.einsum('ai,bj->abij', delta_joint, delta_prime_joint)
    joint_factorises = np.all(np.abs(joint - product) < tolerance)

    gap = joint_pragmatic_info(j) - marginal_phi_delta(j) - marginal_phi_delta_prime(j)
    return IndependenceReport(
        sufficient=bool(priors_factorise and joint_factorises),
        additive=abs(gap) < identity_tolerance,
        gap=gap,
    )
