import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pitchlab.metagame import (
    EloTable,
    MatchRecord,
    PayoffTable,
    elo_update,
    exploitability,
    pfsp_distribution,
    solve_nash,
)

from oracles import support_enumeration_nash

RPS = np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], dtype=float)
PENNIES = np.array([[1, -1], [-1, 1]], dtype=float)


class TestPayoffTable:
    def test_winrate_metric(self):
        table = PayoffTable(["a", "b"])
        table.record("a", "b", wins=3, draws=0, losses=1)
        m = table.matrix("winrate")
        assert m[0, 1] == pytest.approx(0.5)
        assert m[1, 0] == pytest.approx(-0.5)

    def test_all_draws_zero(self):
        table = PayoffTable(["a", "b"])
        table.record("a", "b", wins=0, draws=10, losses=0)
        assert table.matrix("winrate")[0, 1] == 0.0

    def test_antisymmetry(self):
        rng = np.random.default_rng(0)
        table = PayoffTable(["a", "b", "c"])
        for x, y in (("a", "b"), ("a", "c"), ("b", "c")):
            w, l = rng.integers(0, 10, size=2)
            table.record(x, y, wins=float(w), draws=2.0, losses=float(l), goal_diff=float(w - l))
        for metric in ("winrate", "goal_difference"):
            m = table.matrix(metric)
            np.testing.assert_allclose(m + m.T, np.zeros_like(m), atol=1e-12)

    def test_mirrored_cells(self):
        table = PayoffTable(["a", "b"])
        table.record("a", "b", wins=3, draws=1, losses=2, goal_diff=4.0)
        games_ab, wins_ab, draws_ab, losses_ab, gd_ab = table.cell("a", "b")
        games_ba, wins_ba, draws_ba, losses_ba, gd_ba = table.cell("b", "a")
        assert wins_ab == losses_ba and losses_ab == wins_ba
        assert gd_ab == -gd_ba

    def test_duplicate_policy(self):
        table = PayoffTable(["a"])
        with pytest.raises(ValueError):
            table.add_policy("a")

    def test_csv_export(self):
        table = PayoffTable(["a", "b"])
        table.record("a", "b", wins=1, draws=0, losses=0)
        csv_text = table.to_csv("winrate")
        assert csv_text.splitlines()[0] == "policy,a,b"


class TestSolveNash:
    def test_rps_uniform(self):
        res = solve_nash(RPS, tol=1e-3)
        assert res.converged
        np.testing.assert_allclose(res.row, [1 / 3] * 3, atol=0.05)
        np.testing.assert_allclose(res.col, [1 / 3] * 3, atol=0.05)
        assert abs(res.value) < 1e-3
        assert res.exploitability <= 1e-3

    def test_matching_pennies(self):
        res = solve_nash(PENNIES, tol=1e-3)
        np.testing.assert_allclose(res.row, [0.5, 0.5], atol=0.05)
        assert abs(res.value) < 1e-3

    def test_two_by_two_derived_example(self):
        a = np.array([[0, 2], [1, 0]], dtype=float)
        oracle = support_enumeration_nash(a)
        np.testing.assert_allclose(oracle.row, [1 / 3, 2 / 3], atol=1e-9)
        np.testing.assert_allclose(oracle.col, [2 / 3, 1 / 3], atol=1e-9)
        assert oracle.value == pytest.approx(2 / 3)
        res = solve_nash(a, tol=1e-4)
        assert res.value == pytest.approx(oracle.value, abs=1e-4)
        np.testing.assert_allclose(res.row, oracle.row, atol=0.02)

    def test_flagged_when_capped(self):
        res = solve_nash(RPS, tol=1e-12, iteration_cap=100)
        assert not res.converged
        assert res.exploitability > 1e-12
        assert res.iterations == 100

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            solve_nash(np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            solve_nash(np.array([[np.inf, 0], [0, 0]]))

    def test_random_5x5_exploitability(self):
        for seed in range(10):
            a = np.random.default_rng(seed).uniform(-1, 1, size=(5, 5))
            res = solve_nash(a, tol=1e-3)
            assert res.exploitability <= 1e-3

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            raw = rng.uniform(-1, 1, size=(4, 4))
            a = raw - raw.T  # antisymmetric, like a win-rate payoff
            perm = rng.permutation(4)
            res = solve_nash(a, tol=1e-5)
            res_p = solve_nash(a[np.ix_(perm, perm)], tol=1e-5)
            assert res.value == pytest.approx(res_p.value, abs=1e-3)
            np.testing.assert_allclose(res.row[perm], res_p.row, atol=0.03)


class TestExploitability:
    def test_rps_uniform_is_zero(self):
        u = np.array([1 / 3] * 3)
        assert exploitability(RPS, u, u) == pytest.approx(0.0)

    def test_rps_pure_rock_vs_uniform_is_one(self):
        rock = np.array([1.0, 0.0, 0.0])
        u = np.array([1 / 3] * 3)
        assert exploitability(RPS, rock, u) == pytest.approx(1.0)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=60, deadline=None)
    def test_nonnegative(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        a = rng.uniform(-2, 2, size=(m, n))
        row = rng.dirichlet(np.ones(m))
        col = rng.dirichlet(np.ones(n))
        assert exploitability(a, row, col) >= -1e-12


class TestElo:
    def test_equal_draw_unchanged(self):
        assert elo_update(1000, 1000, 0.5) == (1000, 1000)

    def test_equal_win_k32(self):
        ra, rb = elo_update(1000, 1000, 1.0, k=32)
        assert ra == pytest.approx(1016.0)
        assert rb == pytest.approx(984.0)

    def test_worked_example_1200_vs_1000(self):
        expected_gain = 32 * (1 - 1 / (1 + 10 ** (-200 / 400)))
        ra, rb = elo_update(1200, 1000, 1.0, k=32)
        assert ra - 1200 == pytest.approx(expected_gain, abs=1e-6)
        assert ra == pytest.approx(1207.688098, abs=1e-5)

    @given(
        st.floats(min_value=500, max_value=2500),
        st.floats(min_value=500, max_value=2500),
        st.sampled_from([0.0, 0.5, 1.0]),
    )
    @settings(max_examples=100, deadline=None)
    def test_conserves_rating_sum(self, ra, rb, outcome):
        ra2, rb2 = elo_update(ra, rb, outcome)
        assert ra2 + rb2 == pytest.approx(ra + rb, abs=1e-9)

    def test_invalid_outcome(self):
        with pytest.raises(ValueError):
            elo_update(1000, 1000, 1.5)

    def test_log_replay_deterministic(self):
        log = [
            MatchRecord(ts=1, a="x", b="y", outcome_a=1.0),
            MatchRecord(ts=2, a="y", b="z", outcome_a=0.0),
            MatchRecord(ts=2, a="x", b="z", outcome_a=0.5),
        ]
        t1 = EloTable.from_log(log)
        t2 = EloTable.from_log(list(reversed(log)))
        assert t1.ratings == t2.ratings


class TestPFSP:
    def test_hard_weighting_derived(self):
        dist = pfsp_distribution([0.0, 0.5, 1.0], "hard")
        np.testing.assert_allclose(dist, [0.8, 0.2, 0.0])

    def test_equal_rates_uniform(self):
        dist = pfsp_distribution([0.4, 0.4, 0.4], "hard")
        np.testing.assert_allclose(dist, [1 / 3] * 3)

    def test_all_beaten_falls_back_to_uniform(self):
        dist = pfsp_distribution([1.0, 1.0], "hard")
        np.testing.assert_allclose(dist, [0.5, 0.5])

    def test_even_weighting(self):
        dist = pfsp_distribution([0.2, 1.0, 0.7], "even")
        np.testing.assert_allclose(dist, [0.5, 0.0, 0.5])

    def test_unknown_weighting(self):
        with pytest.raises(ValueError):
            pfsp_distribution([0.5], "soft")

    @given(
        st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=12)
    )
    @settings(max_examples=100, deadline=None)
    def test_valid_mixture_for_any_input(self, rates):
        for weighting in ("hard", "even"):
            dist = pfsp_distribution(rates, weighting)
            assert np.all(dist >= 0)
            assert dist.sum() == pytest.approx(1.0, abs=1e-9)
