"""
Random distributions, ensembles and transition matrices for the verification suite. Vectors are
drawn Dirichlet style, by normalising unit exponential draws, and every instance gets its own
PCG64 generator seeded from the suite seed and the instance's index so any single failing instance
can be regenerated on its own.
"""
import numpy as np

from pragmatic.dist import Dist, Prior
from pragmatic.ensemble import MessageEnsemble, UsefulnessLabel
from pragmatic.joint import JointEnsemble


def instance_rng(seed, index):
    """
    The generator for instance number index of a suite run with the given seed.
    """
    return np.random.Generator(np.random.PCG64([seed, index]))


def random_dim(rng, max_dim, min_dim=2):
    return int(rng.integers(min_dim, max_dim + 1))


def random_weights(rng, n, sparsity=0.0):
    """
    Unit exponential draws with each entry zeroed with probability sparsity. At least one entry is
    always left positive.
    """
    weights = rng.standard_exponential(n)
    if sparsity > 0:
        keep = int(np.argmax(weights))
        weights[rng.random(n) < sparsity] = 0.0
        if not weights.any():
            weights[keep] = 1.0
    return weights


def random_dist(rng, n, sparsity=0.0):
    """
    A random distribution over n outcomes, some of which may have zero probability.
    """
    return Dist.from_weights(random_weights(rng, n, sparsity))


def random_prior(rng, n):
    """
    A random strictly positive distribution over n outcomes.
    """
    weights = random_weights(rng, n)
    # keeps -log2 q_i within sensible bounds
    weights += 1e-3
    return Prior(weights / weights.sum())


def random_ensemble(rng, n_outcomes, n_messages, sparsity=0.3):
    """
    A random MessageEnsemble with a strictly positive prior and posteriors that may put zero
    probability on some outcomes.
    """
    return MessageEnsemble(
        random_prior(rng, n_outcomes),
        random_dist(rng, n_messages),
        [random_dist(rng, n_outcomes, sparsity) for _ in range(n_messages)],
    )


def random_labels(rng, n_messages):
    """
    A usefulness label for each of n_messages messages, chosen uniformly.
    """
    labels = list(UsefulnessLabel)
    return [labels[k] for k in rng.integers(0, len(labels), n_messages)]


def random_joint_ensemble(rng, shape, sparsity=0.3, separable=True):
    """
    A random JointEnsemble. When separable is True Delta's posterior over omega depends only on m
    (p_{i,i'|m,m'} = p_{i|m} p_{i'|i,m,m'}), which is the hypothesis the chain rule needs.
    Otherwise both posteriors are free to depend on both messages.

    :param rng: a numpy Generator
    :param shape: (M, M', N, N')
    :param sparsity: chance of each posterior entry being zeroed
    :param separable: whether Delta's posterior depends only on m
    :return: a JointEnsemble
    """
    n_m, n_m_prime, n, n_prime = shape
    joint_prior = random_prior(rng, n * n_prime).probs.reshape(n, n_prime)
    message_probs = random_dist(rng, n_m * n_m_prime).probs.reshape(n_m, n_m_prime)

    if separable:
        delta = np.vstack([random_dist(rng, n, sparsity).probs for _ in range(n_m)])
        delta = np.broadcast_to(delta[:, np.newaxis, :], (n_m, n_m_prime, n))
    else:
        delta = np.array([[random_dist(rng, n, sparsity).probs for _ in range(n_m_prime)]
                          for _ in range(n_m)])
    conditional = np.array([[[random_dist(rng, n_prime, sparsity).probs for _ in range(n)]
                             for _ in range(n_m_prime)] for _ in range(n_m)])
    posteriors = delta[:, :, :, np.newaxis] * conditional
    return JointEnsemble(joint_prior, message_probs, posteriors)


def random_transition(rng, n):
    """
    A random strictly positive row-stochastic matrix, which is always irreducible.
    """
    return np.vstack([random_dist(rng, n).probs for _ in range(n)])
