"""
Pragmatic information of the plays of a one armed bandit (a slot machine with an unknown payout
probability) whose payout probability is estimated with Laplace's rule of succession.

Outcomes are ordered (PAYOUT, NOPAYOUT) throughout.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from pragmatic.dist import Dist, Prior, kl_divergence
from pragmatic.ensemble import MessageEnsemble
from pragmatic.errors import InvalidParameterError

OUTCOMES = ('PAYOUT', 'NOPAYOUT')


@enum.unique
class SweepMode(enum.Enum):
    # w = pi * T exactly, as a real number
    CONTINUOUS = 'continuous'
    # w = round(pi * T), ties to even
    INTEGER = 'integer'


@dataclass(frozen=True)
class BanditState:
    """
    w wins in T plays of a machine whose true payout probability is pi.
    """
    wins: int
    trials: int
    true_payout: float

    def __post_init__(self):
        check_counts(self.wins, self.trials)
        check_payout(self.true_payout)

    def play(self, outcome):
        """
        The state after one more play, 1 for a win and 0 for a loss.
        """
        return BanditState(self.wins + int(outcome), self.trials + 1, self.true_payout)

    def next_trial(self):
        """
        The pragmatic information of the next play from this state, as a SweepRow.
        """
        return trial_pragmatic_info(self.wins, self.trials, self.true_payout)


@dataclass(frozen=True)
class SweepRow:
    """
    The pragmatic information of play T + 1 after w wins in T plays. q1 is the estimated payout
    probability before the play, d_win and d_loss the divergences of the two possible posteriors
    from the prior.
    """
    T: int
    w: float
    q1: float
    d_win: float
    d_loss: float
    phi: float


def check_counts(w, T):
    if T < 0:
        raise InvalidParameterError('T', T, 'non-negative')
    if not 0 <= w <= T:
        raise InvalidParameterError('w', w, f'between 0 and T={T}')


def check_payout(pi):
    if not 0 < pi < 1:
        raise InvalidParameterError('pi', pi, 'strictly between 0 and 1')


def laplace_estimate(w, T):
    """
    Laplace's rule of succession estimate of the payout probability after w wins in T plays,
    (w + 1) / (T + 2).

    :param w: the number of wins
    :param T: the number of plays
    :return: the estimate, always strictly between 0 and 1
    """
    check_counts(w, T)
    return (w + 1) / (T + 2)


def _prior_and_posteriors(w, T):
    q1 = laplace_estimate(w, T)
    prior = Prior([q1, 1 - q1])
    # a win moves us to (w + 1, T + 1), a loss to (w, T + 1)
    after_win = Dist([(w + 2) / (T + 3), (T - w + 1) / (T + 3)])
    after_loss = Dist([(w + 1) / (T + 3), (T - w + 2) / (T + 3)])
    return prior, after_win, after_loss


def trial_ensemble(w, T, pi=None):
    """
    The ensemble of the two messages (PAYOUT, NOPAYOUT) the next play can produce.

    :param w: wins so far
    :param T: plays so far
    :param pi: the probability of a payout message, defaults to the Laplace estimate itself
    :return: a MessageEnsemble labelled with OUTCOMES
    """
    prior, after_win, after_loss = _prior_and_posteriors(w, T)
    if pi is None:
        pi = prior[0]
    check_payout(pi)
    return MessageEnsemble(prior, [pi, 1 - pi], [after_win, after_loss], labels=OUTCOMES)


def trial_pragmatic_info(w, T, pi):
    """
    The pragmatic information of play T + 1, after w wins in T plays, for a machine whose true
    payout probability is pi. w may be a real number in [0, T] (see closed_form_phi).

    :return: a SweepRow
    """
    check_payout(pi)
    prior, after_win, after_loss = _prior_and_posteriors(w, T)
    d_win = kl_divergence(after_win, prior)
    d_loss = kl_divergence(after_loss, prior)
    return SweepRow(T=T, w=w, q1=prior[0], d_win=d_win, d_loss=d_loss,
                    phi=pi * d_win + (1 - pi) * d_loss)


def closed_form_phi(w, T, pi):
    """
    The expanded four term expression for the pragmatic information of play T + 1. Agrees with
    trial_pragmatic_info but is written out in terms of w and T.
    """
    check_counts(w, T)
    check_payout(pi)
    shrink = math.log2((T + 2) / (T + 3))
    d_win = ((w + 2) / (T + 3) * math.log2((w + 2) * (T + 2) / ((T + 3) * (w + 1)))
             + (T - w + 1) / (T + 3) * shrink)
    d_loss = ((w + 1) / (T + 3) * shrink
              + (T - w + 2) / (T + 3) * math.log2((T - w + 2) * (T + 2) / ((T + 3) * (T - w + 1))))
    return pi * d_win + (1 - pi) * d_loss


def sweep(pi, t_max, mode=SweepMode.CONTINUOUS):
    """
    The pragmatic information of each play along the most likely history, w = pi * T, for
    T = 0..t_max.

    :param pi: the true payout probability
    :param t_max: the last T to include
    :param mode: a SweepMode, whether w is kept real or rounded to an integer
    :return: a list of SweepRows ordered by T
    """
    check_payout(pi)
    if t_max < 0:
        raise InvalidParameterError('t_max', t_max, 'non-negative')
    mode = SweepMode(mode)
    rows = []
    for T in range(t_max + 1):
        w = pi * T if mode == SweepMode.CONTINUOUS else round(pi * T)
        rows.append(trial_pragmatic_info(w, T, pi))
    return rows


def windowed_laplace(history, k):
    """
    Laplace's rule of succession applied to only the last k plays of the history, for a decision
    maker that can only remember k plays.

    :param history: a sequence of play outcomes, 1 for a win and 0 for a loss
    :param k: the number of plays remembered
    :return: the estimate of the payout probability
    """
    if k < 1:
        raise InvalidParameterError('k', k, 'at least 1')
    window = list(history)[-k:]
    return laplace_estimate(sum(window), len(window))


def windowed_trial_pragmatic_info(history, k, pi):
    """
    The pragmatic information of the next play for a decision maker that only remembers the last k
    plays. Its prior comes from the current window and each posterior from the window after the
    next play has been added and, if the window was full, its oldest play dropped.

    :param history: the plays so far (1 win, 0 loss)
    :param k: the number of plays remembered
    :param pi: the true payout probability
    :return: a SweepRow with T the length of the history and w the wins in the window
    """
    check_payout(pi)
    q1 = windowed_laplace(history, k)
    window = list(history)[-k:]
    prior = Prior([q1, 1 - q1])
    after = []
    for outcome in (1, 0):
        p1 = windowed_laplace(window + [outcome], k)
        after.append(Dist([p1, 1 - p1]))
    d_win = kl_divergence(after[0], prior)
    d_loss = kl_divergence(after[1], prior)
    return SweepRow(T=len(history), w=sum(window), q1=q1, d_win=d_win, d_loss=d_loss,
                    phi=pi * d_win + (1 - pi) * d_loss)


def windowed_sweep(history, k, pi):
    """
    windowed_trial_pragmatic_info for every prefix of the history, from the empty one to the full
    history.
    """
    history = list(history)
    return [windowed_trial_pragmatic_info(history[:T], k, pi) for T in range(len(history) + 1)]


def simulate_plays(pi, n, seed):
    """
    Simulates n plays of a machine with payout probability pi.

    :param pi: the true payout probability
    :param n: the number of plays
    :param seed: seed for the PCG64 generator
    :return: a list of ints, 1 for a win and 0 for a loss
    """
    check_payout(pi)
    rng = np.random.Generator(np.random.PCG64(seed))
    return (rng.random(n) < pi).astype(int).tolist()
