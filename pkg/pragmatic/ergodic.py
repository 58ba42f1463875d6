"""
Monte Carlo running averages of the pragmatic information of messages sampled from an ensemble,
either independently or along a Markov chain, which converge to the ensemble's pragmatic
information.
"""
import bisect
import enum
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from pragmatic.dist import Dist, as_dist, as_probabilities
from pragmatic.ensemble import per_message_info, ensemble_pragmatic_info
from pragmatic.errors import SourceMismatchError, StationaryMismatchError, ReducibleChainError, \
    ConvergenceError, InvalidDistributionError, InvalidParameterError
from pragmatic.utils import fsum

# the bit generator every trajectory is drawn with, recorded in the output metadata
GENERATOR = 'PCG64'
# how close a Markov source's stationary distribution must be to the ensemble's phi
STATIONARY_TOLERANCE = 1e-9


@enum.unique
class SourceKind(enum.Enum):
    IID = 'iid'
    MARKOV = 'markov'


def make_rng(seed):
    """
    Creates a numpy Generator on the PCG64 bit generator from the given seed.
    """
    return np.random.Generator(np.random.PCG64(seed))


def as_transition_matrix(transition):
    """
    Validates a row-stochastic matrix, returning it as a read-only numpy array with each row
    renormalised.
    """
    matrix = np.array(transition, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidDistributionError(f'transition matrix must be square, got shape '
                                       f'{matrix.shape}', transition)
    rows = np.vstack([as_probabilities(row) for row in matrix])
    rows.setflags(write=False)
    return rows


def check_irreducible(transition):
    """
    Checks that every state of the chain can be reached from every other state, using the
    transitive closure of the transition graph.

    :param transition: a square row-stochastic matrix
    """
    reach = np.asarray(transition) > 0
    for k in range(reach.shape[0]):
        reach = reach | np.outer(reach[:, k], reach[k, :])
    if not reach.all():
        raise ReducibleChainError([tuple(map(int, pair)) for pair in np.argwhere(~reach)])


def _solve_balance(matrix):
    # x (P - I) = 0 with one equation swapped for sum(x) = 1
    n = matrix.shape[0]
    system = matrix.T - np.eye(n)
    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return np.linalg.solve(system, rhs)


def stationary_distribution(transition, tolerance=1e-12, max_iterations=10 ** 5):
    """
    The stationary distribution of an irreducible Markov chain, by power iteration. Each iterate
    is mixed half and half with the previous one, which keeps the same fixed point but stops
    periodic chains from oscillating. Slowly mixing chains that use up the iteration budget are
    solved directly from the balance equations instead.

    :param transition: a square row-stochastic matrix
    :param tolerance: stop once successive iterates differ by less than this in max norm
    :param max_iterations: the power iteration budget
    :return: a Dist
    """
    matrix = as_transition_matrix(transition)
    check_irreducible(matrix)
    current = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    change = math.inf
    for _ in range(max_iterations):
        following = 0.5 * current + 0.5 * (current @ matrix)
        following /= following.sum()
        change = float(np.max(np.abs(following - current)))
        current = following
        if change < tolerance:
            return Dist(current)

    try:
        solved = _solve_balance(matrix)
    except np.linalg.LinAlgError:
        raise ConvergenceError(max_iterations, change)
    residual = float(np.max(np.abs(solved @ matrix - solved)))
    if not np.all(np.isfinite(solved)) or solved.min() < -STATIONARY_TOLERANCE or \
            residual >= STATIONARY_TOLERANCE:
        raise ConvergenceError(max_iterations, change)
    solved = np.clip(solved, 0.0, None)
    return Dist(solved / solved.sum())


@dataclass(frozen=True, eq=False)
class MessageSource:
    """
    A seeded generator of message indexes, either independent draws from a fixed distribution or a
    Markov chain over the messages.
    """
    kind: SourceKind
    seed: int
    probs: Dist = None
    transition: np.ndarray = None
    initial_state: int = None

    @classmethod
    def iid(cls, probs, seed):
        return cls(SourceKind.IID, seed, probs=as_dist(probs))

    @classmethod
    def markov(cls, transition, seed, initial_state=None):
        """
        :param transition: a row-stochastic, irreducible matrix over the messages
        :param seed: the generator seed
        :param initial_state: the first message, drawn from the stationary distribution if None
        """
        matrix = as_transition_matrix(transition)
        check_irreducible(matrix)
        if initial_state is not None and not 0 <= initial_state < matrix.shape[0]:
            raise InvalidParameterError('initial_state', initial_state,
                                        f'a message index below {matrix.shape[0]}')
        return cls(SourceKind.MARKOV, seed, transition=matrix, initial_state=initial_state)

    @property
    def n_messages(self):
        if self.kind == SourceKind.IID:
            return self.probs.n
        return self.transition.shape[0]

    def stationary(self):
        """
        The long run frequency of each message.
        """
        if self.kind == SourceKind.IID:
            return self.probs
        return stationary_distribution(self.transition)

    def sample(self, n, rng):
        """
        Draws n message indexes.

        :param n: the number of messages
        :param rng: a numpy Generator
        :return: a numpy int array
        """
        if self.kind == SourceKind.IID:
            return rng.choice(self.n_messages, size=n, p=self.probs.probs)

        cumulative = [np.cumsum(row).tolist() for row in self.transition]
        last = self.n_messages - 1
        if self.initial_state is None:
            state = int(rng.choice(self.n_messages, p=self.stationary().probs))
        else:
            state = self.initial_state
        messages = np.empty(n, dtype=int)
        if n == 0:
            return messages
        messages[0] = state
        for k, u in enumerate(rng.random(n - 1), start=1):
            state = min(bisect.bisect_right(cumulative[state], u), last)
            messages[k] = state
        return messages


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    The running averages Phi_N, N = 1..n, of the pragmatic information of sampled messages.
    """
    running: np.ndarray
    seed: int
    kind: SourceKind
    generator: str = GENERATOR

    @property
    def n(self):
        return int(self.running.size)

    @property
    def final(self):
        return float(self.running[-1])

    @property
    def metadata(self):
        return f'seed={self.seed} source={self.kind.value} generator={self.generator}'

    def subsampled(self):
        """
        The running average at N = 1, 2, 5, 10, 20, 50, ... and at the final N.

        :return: a list of (N, Phi_N) tuples
        """
        positions = []
        decade = 1
        while decade <= self.n:
            positions.extend(step * decade for step in (1, 2, 5) if step * decade <= self.n)
            decade *= 10
        if not positions or positions[-1] != self.n:
            positions.append(self.n)
        return [(N, float(self.running[N - 1])) for N in positions]

    def to_frame(self):
        rows = self.subsampled()
        return pd.DataFrame({
            'N': [N for N, _ in rows],
            'phi_running_bits': [value for _, value in rows],
        })


def sample_trajectory(e, src, n):
    """
    Samples n messages from the source and returns the running averages of their pragmatic
    information for the ensemble's decision maker. The decision maker starts from the same prior
    for every message.

    :param e: a MessageEnsemble
    :param src: a MessageSource over the ensemble's messages
    :param n: the number of messages to sample
    :return: a Trajectory
    """
    if n < 1:
        raise InvalidParameterError('n', n, 'at least 1')
    if src.n_messages != e.n_messages:
        raise SourceMismatchError(f'the source has {src.n_messages} messages but the ensemble '
                                  f'has {e.n_messages}')
    if src.kind == SourceKind.MARKOV:
        stationary = src.stationary()
        if not stationary.isclose(e.message_probs, STATIONARY_TOLERANCE):
            raise StationaryMismatchError(stationary.to_list(), e.message_probs.to_list())

    info = per_message_info(e)
    messages = src.sample(n, make_rng(src.seed))
    running = np.cumsum(info[messages]) / np.arange(1, n + 1)
    running.setflags(write=False)
    return Trajectory(running, src.seed, src.kind)


def convergence_band(e, n):
    """
    Three standard errors of the running average after n independent messages: 3 sigma / sqrt(n),
    with sigma the phi weighted standard deviation of the per message pragmatic information.
    """
    info = per_message_info(e)
    phi = ensemble_pragmatic_info(e)
    variance = fsum(e.message_probs.probs * (info - phi) ** 2)
    return 3 * math.sqrt(variance) / math.sqrt(n)
