"""
The randomised verification suite. Each Check is a Step that tests one property on a number of
random instances (or once, on a fixed instance) and records how many instances passed along with
the first one that didn't, serialised so it can be fed back into the commands.
"""
import abc
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from pragmatic.bandit import trial_pragmatic_info, closed_form_phi, trial_ensemble, sweep, \
    SweepMode
from pragmatic.codes import expected_codelength_gap, huffman_code_lengths, \
    exhaustive_optimal_length, CodeMode
from pragmatic.dist import Prior, kl_divergence, shannon_entropy, convex_mix
from pragmatic.ensemble import MessageEnsemble, ensemble_pragmatic_info, decompose, \
    definitive_upper_bound, definitive_phi, partition_pragmatic_info, per_message_info
from pragmatic.ergodic import MessageSource, stationary_distribution, sample_trajectory, \
    convergence_band
from pragmatic.joint import JointEnsemble, joint_pragmatic_info, marginal_phi_delta, \
    marginal_phi_delta_prime, conditional_pragmatic_info, chain_rule_residual, \
    cross_message_information, check_pragmatic_independence
from pragmatic.report import RunReport
from pragmatic.resources import Fixture, load_fixture, ensemble_to_dict, joint_to_dict
from pragmatic.sampling import instance_rng, random_dim, random_dist, random_prior, \
    random_ensemble, random_labels, random_joint_ensemble, random_transition
from pragmatic.utils import Step

# tolerances on the identities, by how much arithmetic sits between the two sides
EXACT = 1e-12
IDENTITY = 1e-10
# the exhaustive prefix code search is exponential in the outcome count
HUFFMAN_MAX_DIM = 6
# the chain rule instances have four dimensions
JOINT_MAX_DIM = 4
BANDIT_MAX_T = 1000
# ordered from furthest to closest to 1/2
DECAY_PAYOUTS = (0.1, 0.25, 0.5)
ORDERING_T_MAX = 200
FADED_PHI = 0.005
# running averages are sampled over at most 5 messages and 5 outcomes
ERGODIC_MAX_DIM = 5
ERGODIC_SEEDS = 20
CONVERGENCE_MESSAGES = 100000
TRIAL_MESSAGES = 2000
MARKOV_MESSAGES = 10000
# standard errors allowed for a running average checked on every trial
TRIAL_SIGMAS = 5
# rounding in a running sum of up to CONVERGENCE_MESSAGES terms
RUNNING_SLACK = 1e-9


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    passed: int = 0
    counterexample: dict = None

    @property
    def ok(self):
        return self.passed == self.trials


class Check(Step, abc.ABC):
    """
    A property tested on random instances. Subclasses implement trial, which returns None when
    the instance satisfies the property and a dict describing the instance when it doesn't.
    """
    name = None
    description = None

    def __init__(self, trials, seed, max_dim):
        self.trials = trials
        self.seed = seed
        self.max_dim = max_dim

    @property
    def message(self):
        return f'Checking {self.description}'

    @abc.abstractmethod
    def trial(self, rng):
        """
        Runs the check on one random instance.

        :param rng: the instance's numpy Generator
        :return: None if the property holds, otherwise the counterexample as a dict
        """
        pass

    def run(self, context):
        result = CheckResult(self.name)
        for index in tqdm(range(self.trials), desc=self.name, leave=False,
                          disable=context.progress):
            failure = self.trial(instance_rng(self.seed, index))
            result.trials += 1
            if failure is None:
                result.passed += 1
            elif result.counterexample is None:
                result.counterexample = {'check': self.name, 'seed': self.seed, 'trial': index,
                                         **failure}
        return result


class FixedCheck(Check, abc.ABC):
    """
    A property checked once, on a fixed instance.
    """

    def __init__(self, trials, seed, max_dim):
        super().__init__(1, seed, max_dim)


class KLNonNegativity(Check):
    name = 'kl_non_negativity'
    description = 'D(p||q) >= 0 with equality when p = q'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        p = random_dist(rng, n, sparsity=0.3)
        q = random_prior(rng, n)
        divergence = kl_divergence(p, q)
        self_divergence = kl_divergence(q, q)
        if divergence < 0 or self_divergence >= EXACT:
            return {'p': p.to_list(), 'q': q.to_list(), 'divergence': divergence,
                    'self_divergence': self_divergence}


class KLConvexity(Check):
    name = 'kl_convexity'
    description = 'joint convexity of D(p||q)'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        p1, p2 = random_dist(rng, n, sparsity=0.3), random_dist(rng, n, sparsity=0.3)
        q1, q2 = random_prior(rng, n), random_prior(rng, n)
        weight = float(rng.random())
        mixed = kl_divergence(convex_mix(p1, p2, weight), convex_mix(q1, q2, weight))
        bound = weight * kl_divergence(p1, q1) + (1 - weight) * kl_divergence(p2, q2)
        if mixed > bound + IDENTITY:
            return {'p1': p1.to_list(), 'p2': p2.to_list(), 'q1': q1.to_list(),
                    'q2': q2.to_list(), 'lambda': weight, 'mixed': mixed, 'bound': bound}


class WrongCodeIdeal(Check):
    name = 'wrong_code_ideal'
    description = 'the ideal code length gap equals D(p||q)'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        p = random_dist(rng, n, sparsity=0.3)
        q = random_prior(rng, n)
        gap = expected_codelength_gap(p, q, CodeMode.IDEAL)
        divergence = kl_divergence(p, q)
        if abs(gap - divergence) >= EXACT:
            return {'p': p.to_list(), 'q': q.to_list(), 'gap': gap, 'divergence': divergence}


class WrongCodeInteger(Check):
    name = 'wrong_code_integer'
    description = 'the integer code length gap lies within one bit of D(p||q)'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        p = random_dist(rng, n, sparsity=0.3)
        q = random_prior(rng, n)
        gap = expected_codelength_gap(p, q, CodeMode.INTEGER)
        divergence = kl_divergence(p, q)
        if not divergence - 1 - EXACT < gap < divergence + 1 + EXACT:
            return {'p': p.to_list(), 'q': q.to_list(), 'gap': gap, 'divergence': divergence}


class HuffmanOptimality(Check):
    name = 'huffman_optimality'
    description = 'Huffman codes against an exhaustive search of prefix codes'

    def trial(self, rng):
        n = random_dim(rng, min(self.max_dim, HUFFMAN_MAX_DIM))
        p = random_dist(rng, n)
        lengths = huffman_code_lengths(p)
        huffman = lengths.expected_length(p)
        optimal = exhaustive_optimal_length(p)
        if abs(huffman - optimal) >= EXACT or lengths.kraft_sum() > 1 + EXACT:
            return {'p': p.to_list(), 'lengths': list(lengths.lengths), 'huffman': huffman,
                    'optimal': optimal}


class EntropyBounds(Check):
    name = 'entropy_bounds'
    description = '0 <= H(p) <= log2 N'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        p = random_dist(rng, n, sparsity=0.3)
        entropy = shannon_entropy(p)
        if not 0 <= entropy <= math.log2(n):
            return {'p': p.to_list(), 'entropy': entropy}


class EnsembleNonNegativity(Check):
    name = 'ensemble_non_negativity'
    description = 'Phi >= 0 with equality when no message changes the prior'

    def trial(self, rng):
        e = _random_ensemble(rng, self.max_dim)
        phi = ensemble_pragmatic_info(e)
        unchanged = MessageEnsemble(e.prior, e.message_probs, [e.prior] * e.n_messages)
        unchanged_phi = ensemble_pragmatic_info(unchanged)
        if phi < 0 or unchanged_phi >= EXACT:
            return {'ensemble': ensemble_to_dict(e), 'phi': phi, 'unchanged_phi': unchanged_phi}


class UpperBound(Check):
    name = 'upper_bound'
    description = 'Phi <= max -log2 q_i, reached by a definitive message'

    def trial(self, rng):
        e = _random_ensemble(rng, self.max_dim)
        phi = ensemble_pragmatic_info(e)
        bound = definitive_upper_bound(e.prior)
        least_likely = int(np.argmin(e.prior.probs))
        reached = ensemble_pragmatic_info(MessageEnsemble.definitive(e.prior, [least_likely], [1]))
        if phi > bound + EXACT or abs(reached - bound) >= EXACT:
            return {'ensemble': ensemble_to_dict(e), 'phi': phi, 'bound': bound,
                    'reached': reached}


class Decomposition(Check):
    name = 'decomposition'
    description = 'Phi = I + D(average posterior||q) and Phi >= I'

    def trial(self, rng):
        e = _random_ensemble(rng, self.max_dim)
        report = decompose(e)
        if abs(report.residual) >= IDENTITY or report.phi < report.mutual_info - IDENTITY:
            return {'ensemble': ensemble_to_dict(e), 'phi': report.phi,
                    'mutual_info': report.mutual_info, 'prior_update': report.prior_update}

        # with the prior set to the average posterior Phi and I coincide
        posteriors = [random_dist(rng, e.n_outcomes) for _ in range(e.n_messages)]
        average = e.message_probs.probs @ np.vstack([posterior.probs for posterior in posteriors])
        matched = MessageEnsemble(Prior(average / average.sum()), e.message_probs, posteriors)
        report = decompose(matched)
        if abs(report.phi - report.mutual_info) >= IDENTITY:
            return {'ensemble': ensemble_to_dict(matched), 'phi': report.phi,
                    'mutual_info': report.mutual_info}


class DefinitiveFormula(Check):
    name = 'definitive_formula'
    description = 'Phi = -sum phi_m log2 q_k(m) for definitive ensembles'

    def trial(self, rng):
        n = random_dim(rng, self.max_dim)
        n_messages = random_dim(rng, self.max_dim, min_dim=1)
        targets = rng.integers(0, n, n_messages).tolist()
        e = MessageEnsemble.definitive(random_prior(rng, n), targets,
                                       random_dist(rng, n_messages))
        phi = ensemble_pragmatic_info(e)
        closed_form = definitive_phi(e)
        if abs(phi - closed_form) >= EXACT:
            return {'ensemble': ensemble_to_dict(e), 'phi': phi, 'closed_form': closed_form}


class ChainRule(Check):
    name = 'chain_rule'
    description = 'joint = marginal + conditional pragmatic information'

    def trial(self, rng):
        j = random_joint_ensemble(rng, _joint_shape(rng, self.max_dim))
        residual = chain_rule_residual(j)
        if abs(residual) >= IDENTITY:
            return {'joint': joint_to_dict(j), 'residual': residual}

        # when m' also tells Delta something the residual is exactly that
        j = random_joint_ensemble(rng, _joint_shape(rng, self.max_dim), separable=False)
        residual = chain_rule_residual(j)
        cross = cross_message_information(j)
        if abs(residual - cross) >= IDENTITY:
            return {'joint': joint_to_dict(j), 'residual': residual, 'cross': cross}


class SufficientCondition(Check):
    name = 'sufficient_condition'
    description = 'the factorisation condition implies additivity'

    def trial(self, rng):
        delta = _random_ensemble(rng, min(self.max_dim, JOINT_MAX_DIM))
        delta_prime = _random_ensemble(rng, min(self.max_dim, JOINT_MAX_DIM))
        product = JointEnsemble.product(delta, delta_prime)
        report = check_pragmatic_independence(product)
        if not (report.sufficient and report.additive):
            return {'joint': joint_to_dict(product), 'sufficient': report.sufficient,
                    'gap': report.gap}

        j = random_joint_ensemble(rng, _joint_shape(rng, self.max_dim))
        report = check_pragmatic_independence(j)
        if not report.consistent:
            return {'joint': joint_to_dict(j), 'sufficient': report.sufficient,
                    'gap': report.gap}


class Partition(Check):
    name = 'partition'
    description = 'the usefulness partition sums to Phi'

    def trial(self, rng):
        e = _random_ensemble(rng, self.max_dim)
        labels = random_labels(rng, e.n_messages)
        phi = ensemble_pragmatic_info(e)
        parts = partition_pragmatic_info(e, labels)
        in_range = all(-EXACT <= part <= phi + EXACT
                       for part in (parts.irrelevant, parts.disinformative, parts.useful))
        if abs(parts.total - phi) >= EXACT or not in_range:
            usefulness = dict(enumerate(labels))
            return {'ensemble': ensemble_to_dict(e, usefulness), 'phi': phi,
                    'partition': [parts.irrelevant, parts.disinformative, parts.useful]}


def _random_bandit(rng):
    T = int(rng.integers(0, BANDIT_MAX_T + 1))
    w = int(rng.integers(0, T + 1))
    # payouts well inside (0, 1)
    pi = float(rng.uniform(0.001, 0.999))
    return w, T, pi


class BanditClosedForm(Check):
    name = 'bandit_closed_form'
    description = 'per play Phi against the expanded closed form'

    def trial(self, rng):
        w, T, pi = _random_bandit(rng)
        phi = trial_pragmatic_info(w, T, pi).phi
        closed_form = closed_form_phi(w, T, pi)
        if abs(phi - closed_form) >= EXACT or phi <= 0:
            return {'w': w, 'T': T, 'pi': pi, 'phi': phi, 'closed_form': closed_form}


class BanditSymmetry(Check):
    name = 'bandit_symmetry'
    description = 'Phi(w, T, pi) = Phi(T - w, T, 1 - pi)'

    def trial(self, rng):
        w, T, pi = _random_bandit(rng)
        phi = trial_pragmatic_info(w, T, pi).phi
        mirrored = trial_pragmatic_info(T - w, T, 1 - pi).phi
        if abs(phi - mirrored) >= EXACT:
            return {'w': w, 'T': T, 'pi': pi, 'phi': phi, 'mirrored': mirrored}


class BanditConsistency(Check):
    name = 'bandit_consistency'
    description = 'per play Phi against the ensemble of the play'

    def trial(self, rng):
        w, T, pi = _random_bandit(rng)
        phi = trial_pragmatic_info(w, T, pi).phi
        from_ensemble = ensemble_pragmatic_info(trial_ensemble(w, T, pi))
        if abs(phi - from_ensemble) >= EXACT:
            return {'w': w, 'T': T, 'pi': pi, 'phi': phi, 'from_ensemble': from_ensemble}


class BanditDecay(FixedCheck):
    name = 'bandit_decay'
    description = 'per play Phi decreasing along the most likely history'

    def trial(self, rng):
        for pi in DECAY_PAYOUTS:
            for mode in SweepMode:
                phis = [row.phi for row in sweep(pi, BANDIT_MAX_T, mode)]
                for T, (current, following) in enumerate(zip(phis, phis[1:])):
                    if not current > following > 0:
                        return {'pi': pi, 'mode': mode.value, 'T': T, 'phi': current,
                                'next_phi': following}


class BooleanExample(FixedCheck):
    name = 'boolean_example'
    description = 'the Boolean joint example'

    def trial(self, rng):
        j = load_fixture(Fixture.BOOLEAN_JOINT)
        expectations = [
            ('Phi_joint', joint_pragmatic_info(j), 2.0),
            ('Phi_delta', marginal_phi_delta(j), 1.0),
            ('Phi_delta_prime', marginal_phi_delta_prime(j), 0.75),
            ('Phi_conditional', conditional_pragmatic_info(j), 1.0),
        ]
        for name, value, expected in expectations:
            if abs(value - expected) >= EXACT:
                return {'joint': joint_to_dict(j), 'quantity': name, 'value': value,
                        'expected': expected}
        gap = check_pragmatic_independence(j).gap
        if abs(gap - 0.25) >= EXACT:
            return {'joint': joint_to_dict(j), 'quantity': 'additivity_gap', 'value': gap,
                    'expected': 0.25}


class BanditOrdering(FixedCheck):
    name = 'bandit_ordering'
    description = 'per play Phi larger for payouts closer to 1/2 and faded after 200 plays'

    def trial(self, rng):
        sweeps = [sweep(pi, ORDERING_T_MAX) for pi in DECAY_PAYOUTS]
        for T, rows in enumerate(zip(*sweeps)):
            phis = [row.phi for row in rows]
            # every payout starts from the same uniform prior
            ordered = max(phis) - min(phis) < EXACT if T == 0 else \
                all(further < closer for further, closer in zip(phis, phis[1:]))
            if not ordered:
                return {'payouts': list(DECAY_PAYOUTS), 'T': T, 'phis': phis}
        for pi, rows in zip(DECAY_PAYOUTS, sweeps):
            if rows[-1].phi >= FADED_PHI:
                return {'pi': pi, 'T': ORDERING_T_MAX, 'phi': rows[-1].phi}


def _ergodic_ensemble(rng, max_dim):
    return _random_ensemble(rng, min(max_dim, ERGODIC_MAX_DIM))


class TrajectoryBounds(Check):
    name = 'trajectory_bounds'
    description = 'running averages reproducible from their seed and within [0, max D(p_m||q)]'

    def trial(self, rng):
        e = _ergodic_ensemble(rng, self.max_dim)
        seed = int(rng.integers(2 ** 32))
        src = MessageSource.iid(e.message_probs, seed)
        first = sample_trajectory(e, src, TRIAL_MESSAGES).running
        second = sample_trajectory(e, src, TRIAL_MESSAGES).running
        bound = float(per_message_info(e).max())
        if not np.array_equal(first, second) or first.min() < -RUNNING_SLACK or \
                first.max() > bound + RUNNING_SLACK:
            return {'ensemble': ensemble_to_dict(e), 'seed': seed, 'bound': bound,
                    'min': float(first.min()), 'max': float(first.max()),
                    'reproduced': bool(np.array_equal(first, second))}


class TrajectoryConvergence(FixedCheck):
    name = 'trajectory_convergence'
    description = 'Phi_N within 3 sigma / sqrt(N) of Phi for 19 of 20 seeds'

    def trial(self, rng):
        e = _ergodic_ensemble(rng, self.max_dim)
        phi = ensemble_pragmatic_info(e)
        band = convergence_band(e, CONVERGENCE_MESSAGES)
        finals = [sample_trajectory(e, MessageSource.iid(e.message_probs, seed),
                                    CONVERGENCE_MESSAGES).final
                  for seed in range(ERGODIC_SEEDS)]
        outside = [seed for seed, final in enumerate(finals)
                   if abs(final - phi) > band + RUNNING_SLACK]
        if len(outside) > 1:
            return {'ensemble': ensemble_to_dict(e), 'phi': phi, 'band': band,
                    'outside': outside, 'finals': finals}


class MarkovConvergence(Check):
    name = 'markov_convergence'
    description = 'Markov and i.i.d. message sources converge to the same Phi'

    def trial(self, rng):
        e = _ergodic_ensemble(rng, self.max_dim)
        phi = ensemble_pragmatic_info(e)
        probs = e.message_probs.probs
        # stay put with probability stay, otherwise redraw from phi: stationary at phi and the
        # running average's variance grows by (1 + stay) / (1 - stay)
        stay = float(rng.uniform(0, 0.5))
        transition = stay * np.eye(e.n_messages) + (1 - stay) * np.outer(np.ones_like(probs), probs)
        seed = int(rng.integers(2 ** 32))
        iid = sample_trajectory(e, MessageSource.iid(probs, seed), MARKOV_MESSAGES).final
        markov = sample_trajectory(e, MessageSource.markov(transition, seed),
                                   MARKOV_MESSAGES).final
        sigma = convergence_band(e, MARKOV_MESSAGES) / 3
        iid_band = TRIAL_SIGMAS * sigma + RUNNING_SLACK
        markov_band = TRIAL_SIGMAS * sigma * math.sqrt((1 + stay) / (1 - stay)) + RUNNING_SLACK
        if abs(iid - phi) > iid_band or abs(markov - phi) > markov_band:
            return {'ensemble': ensemble_to_dict(e), 'transition': transition.tolist(),
                    'seed': seed, 'phi': phi, 'iid': iid, 'markov': markov}


class StationaryDistribution(Check):
    name = 'stationary_distribution'
    description = 'power iteration stationary distributions'

    def trial(self, rng):
        transition = random_transition(rng, random_dim(rng, self.max_dim))
        stationary = stationary_distribution(transition).probs
        change = float(np.max(np.abs(stationary @ transition - stationary)))
        if change >= IDENTITY:
            return {'transition': transition.tolist(), 'stationary': stationary.tolist(),
                    'change': change}


def _random_ensemble(rng, max_dim):
    return random_ensemble(rng, random_dim(rng, max_dim), random_dim(rng, max_dim, min_dim=1))


def _joint_shape(rng, max_dim):
    return tuple(random_dim(rng, min(max_dim, JOINT_MAX_DIM)) for _ in range(4))


CHECKS = [
    KLNonNegativity,
    KLConvexity,
    WrongCodeIdeal,
    WrongCodeInteger,
    HuffmanOptimality,
    EntropyBounds,
    EnsembleNonNegativity,
    UpperBound,
    Decomposition,
    DefinitiveFormula,
    ChainRule,
    SufficientCondition,
    Partition,
    BanditClosedForm,
    BanditSymmetry,
    BanditConsistency,
    BanditDecay,
    BanditOrdering,
    BooleanExample,
    StationaryDistribution,
    TrajectoryBounds,
    TrajectoryConvergence,
    MarkovConvergence,
]


def verification_steps(trials, seed, max_dim):
    """
    Creates the suite's checks.

    :param trials: the number of random instances per check
    :param seed: the suite seed
    :param max_dim: the largest outcome/message count of the random instances
    :return: a list of Check steps
    """
    return [check(trials, seed, max_dim) for check in CHECKS]


def summarise(results):
    """
    Turns the suite's CheckResults into a RunReport with one check row per property, its value
    being the number of failing instances.
    """
    report = RunReport('verify')
    for result in results:
        report.add_check(result.name, result.trials - result.passed, 1,
                         gloss=f'{result.passed}/{result.trials} instances passed',
                         passed=result.ok)
    return report
