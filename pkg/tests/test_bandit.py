import pytest
from hypothesis import given, strategies as st

from pragmatic.bandit import BanditState, SweepMode, laplace_estimate, trial_ensemble, \
    trial_pragmatic_info, closed_form_phi, sweep, windowed_laplace, \
    windowed_trial_pragmatic_info, windowed_sweep, simulate_plays
from pragmatic.ensemble import ensemble_pragmatic_info
from pragmatic.errors import InvalidParameterError

FIRST_PLAY_PHI = 0.0817041659455
payouts = st.floats(min_value=0.001, max_value=0.999)


@st.composite
def plays(draw):
    T = draw(st.integers(min_value=0, max_value=1000))
    return draw(st.integers(min_value=0, max_value=T)), T, draw(payouts)


class TestLaplace:

    @pytest.mark.parametrize('w,T,expected', [(0, 0, 0.5), (1, 1, 2 / 3), (5, 10, 0.5)])
    def test_estimate(self, w, T, expected):
        assert laplace_estimate(w, T) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize('w,T', [(2, 1), (-1, 3), (0, -1)])
    def test_invalid_counts(self, w, T):
        with pytest.raises(InvalidParameterError):
            laplace_estimate(w, T)


class TestBanditState:

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            BanditState(3, 2, 0.5)
        with pytest.raises(InvalidParameterError):
            BanditState(0, 0, 1)

    def test_play(self):
        state = BanditState(0, 0, 0.3).play(1).play(0)
        assert (state.wins, state.trials) == (1, 2)
        assert state.next_trial() == trial_pragmatic_info(1, 2, 0.3)


class TestTrial:

    def test_ensemble(self):
        e = trial_ensemble(0, 2, 0.5)
        assert e.prior.isclose([0.25, 0.75])
        assert e.posteriors[0].isclose([0.4, 0.6])
        assert e.posteriors[1].isclose([0.2, 0.8])
        assert e.labels == ('PAYOUT', 'NOPAYOUT')

    def test_ensemble_defaults_to_estimated_payout(self):
        assert trial_ensemble(0, 2).message_probs.isclose([0.25, 0.75])

    def test_first_play(self):
        row = trial_pragmatic_info(0, 0, 0.5)
        assert row.q1 == 0.5
        assert row.d_win == pytest.approx(row.d_loss, abs=1e-15)
        assert row.phi == pytest.approx(FIRST_PLAY_PHI, abs=1e-12)

    def test_decays(self):
        assert trial_pragmatic_info(500, 1000, 0.5).phi < trial_pragmatic_info(0, 0, 0.5).phi

    def test_larger_near_half(self):
        assert trial_pragmatic_info(5, 10, 0.5).phi > trial_pragmatic_info(1, 10, 0.1).phi

    def test_invalid_payout(self):
        with pytest.raises(InvalidParameterError):
            trial_pragmatic_info(0, 0, 0)

    @given(plays())
    def test_closed_form(self, play):
        w, T, pi = play
        assert trial_pragmatic_info(w, T, pi).phi == pytest.approx(closed_form_phi(w, T, pi),
                                                                   abs=1e-12)

    @given(plays())
    def test_positive(self, play):
        w, T, pi = play
        row = trial_pragmatic_info(w, T, pi)
        assert row.phi > 0
        assert row.phi == pytest.approx(pi * row.d_win + (1 - pi) * row.d_loss, abs=1e-12)

    @given(plays())
    def test_symmetry(self, play):
        w, T, pi = play
        assert trial_pragmatic_info(w, T, pi).phi == pytest.approx(
            trial_pragmatic_info(T - w, T, 1 - pi).phi, abs=1e-12)

    @given(plays())
    def test_matches_ensemble(self, play):
        w, T, pi = play
        assert trial_pragmatic_info(w, T, pi).phi == pytest.approx(
            ensemble_pragmatic_info(trial_ensemble(w, T, pi)), abs=1e-12)


class TestSweep:

    def test_first_row(self):
        for pi in (0.1, 0.5, 0.9):
            row = sweep(pi, 0)[0]
            assert (row.T, row.w, row.q1) == (0, 0, 0.5)

    @pytest.mark.parametrize('mode', list(SweepMode))
    @pytest.mark.parametrize('pi', [0.1, 0.25, 0.5])
    def test_strictly_decreasing(self, pi, mode):
        phis = [row.phi for row in sweep(pi, 1000, mode)]
        assert all(current > following > 0 for current, following in zip(phis, phis[1:]))

    def test_ordered_by_closeness_to_half(self):
        sweeps = [sweep(pi, 200) for pi in (0.1, 0.25, 0.5)]
        for T, (far, middle, near) in enumerate(zip(*sweeps)):
            if T == 0:
                assert far.phi == pytest.approx(near.phi, abs=1e-15)
                assert middle.phi == pytest.approx(near.phi, abs=1e-15)
            else:
                assert far.phi < middle.phi < near.phi

    def test_small_after_200_plays(self):
        for pi in (0.1, 0.25, 0.5):
            assert sweep(pi, 200)[-1].phi < 0.005

    def test_integer_mode_rounds(self):
        rows = sweep(0.25, 10, SweepMode.INTEGER)
        assert [row.w for row in rows] == [round(0.25 * T) for T in range(11)]
        assert all(isinstance(row.w, int) for row in rows)

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            sweep(1.5, 10)
        with pytest.raises(InvalidParameterError):
            sweep(0.5, -1)


class TestWindowed:

    def test_only_losses_remembered(self):
        assert windowed_laplace((1, 1, 1, 1, 1, 0, 0, 0, 0, 0), 5) == pytest.approx(1 / 7)

    def test_empty_history(self):
        assert windowed_laplace([], 3) == 0.5

    def test_full_window(self):
        history = [1, 0, 0, 1, 1, 1]
        assert windowed_laplace(history, 10) == laplace_estimate(4, 6)

    def test_invalid_window(self):
        with pytest.raises(InvalidParameterError):
            windowed_laplace([1], 0)

    def test_long_memory_matches_full_history(self):
        history = [1, 0, 0, 1, 1, 1]
        row = windowed_trial_pragmatic_info(history, 100, 0.6)
        assert row.phi == pytest.approx(trial_pragmatic_info(4, 6, 0.6).phi, abs=1e-12)

    def test_sweep(self):
        history = simulate_plays(0.3, 20, seed=1)
        rows = windowed_sweep(history, 5, 0.3)
        assert [row.T for row in rows] == list(range(21))
        assert all(row.w <= 5 for row in rows)
        assert all(row.phi > 0 for row in rows)


class TestSimulatePlays:

    def test_reproducible(self):
        assert simulate_plays(0.3, 50, seed=9) == simulate_plays(0.3, 50, seed=9)

    def test_outcomes(self):
        plays = simulate_plays(0.3, 1000, seed=2)
        assert len(plays) == 1000
        assert set(plays) <= {0, 1}
        assert 200 < sum(plays) < 400
