import numpy as np
import pytest

from pitchlab.analysis import (
    Replay,
    ReplayError,
    ReplayStep,
    analyze_replay,
    crossplay_matrix,
    decompose,
    detect_events,
    match_style_stats,
    normalize_metrics,
    radar_csv,
    read_replay,
    style_radar,
    write_replay,
)
from pitchlab.game import MiniPitchConfig, Team
from pitchlab.game.types import BallState, PlayerState, Role
from pitchlab.learner import built_in_ai, scripted_policy

from conftest import roll_random_replay
from oracles import scan_replay


def synthetic_replay(owners, scores=None, n_steps=None, actions=None):
    """Build a replay from an ownership stream: owners[t] is None or
    (team_str, player); scores[t] optional (l, r)."""
    n_steps = n_steps if n_steps is not None else len(owners)
    steps = []
    for t in range(n_steps):
        owner = owners[t] if t < len(owners) else None
        score = scores[t] if scores else (0, 0)
        ball = BallState(
            x=5,
            y=4,
            owned_team=None if owner is None else Team(owner[0]),
            owned_player=None if owner is None else owner[1],
        )
        steps.append(
            ReplayStep(
                t=t,
                score=tuple(score),
                mode="Normal",
                ball=ball,
                left=(PlayerState(2, 2, role=Role.FWD),),
                right=(PlayerState(9, 2, role=Role.FWD),),
                actions=actions[t] if actions else ((0,), (0,)),
                rewards=(0.0, 0.0),
            )
        )
    return Replay(header={"env": "synthetic", "format": "replay/1"}, steps=steps)


class TestReplayIO:
    def test_round_trip_bitwise(self, pitch_3v3):
        replay = roll_random_replay(pitch_3v3, seed=3)
        text = write_replay(replay)
        again = read_replay(text)
        assert write_replay(again) == text

    def test_empty_body_is_valid(self, pitch_3v3):
        replay = Replay(header={"env": pitch_3v3.fingerprint()})
        text = write_replay(replay)
        parsed = read_replay(text)
        assert parsed.n_steps == 0

    def test_truncated_final_line_names_line(self, pitch_3v3):
        replay = roll_random_replay(pitch_3v3, seed=4)
        text = write_replay(replay)
        truncated = text[: len(text) - 40]
        with pytest.raises(ReplayError) as err:
            read_replay(truncated)
        assert f"line {len(replay.steps) + 1}" in str(err.value)

    def test_header_fingerprint_mismatch_refused(self, pitch_3v3):
        replay = roll_random_replay(pitch_3v3, seed=4)
        with pytest.raises(ReplayError):
            read_replay(write_replay(replay), expected_fingerprint="other-env")

    def test_noncontiguous_steps_rejected(self):
        replay = synthetic_replay([("L", 0), ("L", 0)])
        text = write_replay(replay)
        lines = text.splitlines()
        del lines[1]
        with pytest.raises(ReplayError):
            read_replay("\n".join(lines) + "\n")

    def test_inconsistent_ownership_rejected(self):
        replay = synthetic_replay([("L", 0)])
        text = write_replay(replay)
        bad = text.replace('"owner":["L",0]', '"owner":["L",null]')
        assert bad != text
        with pytest.raises(ReplayError):
            read_replay(bad)


class TestDecompose:
    def test_single_chain_no_boundaries(self):
        replay = synthetic_replay([("L", 0)] * 30)
        tree = decompose(replay)
        assert len(tree.subgames) == 1
        assert len(tree.subgames[0].chains) == 1
        assert tree.subgames[0].start == 0 and tree.subgames[0].end == 29

    def test_goal_boundaries_three_subgames(self):
        owners = []
        scores = []
        score = (0, 0)
        for t in range(200):
            if t == 40:
                score = (1, 0)
                owners.append(None)
            elif t == 120:
                score = (1, 1)
                owners.append(None)
            else:
                owners.append(("L", 0) if (t // 25) % 2 == 0 else ("R", 0))
            scores.append(score)
        tree = decompose(synthetic_replay(owners, scores))
        assert [(sg.start, sg.end) for sg in tree.subgames] == [
            (0, 40),
            (41, 120),
            (121, 199),
        ]

    def test_pass_flight_attributed_to_passer(self):
        owners = [("L", 0)] * 3 + [None] * 2 + [("L", 1)] * 3
        tree = decompose(synthetic_replay(owners))
        chains = tree.subgames[0].chains
        assert len(chains) == 1
        nodes = chains[0].nodes
        assert [(n.player, n.start, n.end) for n in nodes] == [(0, 0, 4), (1, 5, 7)]

    def test_loose_ball_between_teams_belongs_to_no_node(self):
        owners = [("L", 0)] * 3 + [None] * 4 + [("R", 1)] * 3
        tree = decompose(synthetic_replay(owners))
        chains = tree.subgames[0].chains
        assert [(c.team.value, c.start, c.end) for c in chains] == [
            ("L", 0, 2),
            ("R", 7, 9),
        ]

    def test_chains_alternate_teams(self, pitch_3v3):
        for seed in range(5):
            replay = roll_random_replay(pitch_3v3, seed=seed)
            tree = decompose(replay)
            for sg in tree.subgames:
                for a, b in zip(sg.chains, sg.chains[1:]):
                    assert a.team is not b.team

    def test_node_intervals_tile_attributed_steps(self, pitch_3v3):
        for seed in range(5):
            replay = roll_random_replay(pitch_3v3, seed=seed)
            tree = decompose(replay)
            covered = set()
            for _team, node in tree.flattened_nodes():
                for t in range(node.start, node.end + 1):
                    assert t not in covered, "overlapping node intervals"
                    covered.add(t)
            # Every owned step must be covered; gaps only where unattributed.
            for step in replay.steps:
                if step.owner() is not None:
                    assert step.t in covered


class TestDetectEvents:
    def test_pass_then_goal_counts_assist(self):
        owners = [("L", 0)] * 3 + [("L", 1)] * 2 + [None]
        scores = [(0, 0)] * 5 + [(1, 0)]
        counts = detect_events(decompose(synthetic_replay(owners, scores)))
        assert counts.passes["L"] == 1
        assert counts.assists["L"] == 1
        assert counts.goals["L"] == 1

    def test_single_node_chain_goal_no_assist(self):
        owners = [("L", 0)] * 5 + [None]
        scores = [(0, 0)] * 5 + [(1, 0)]
        counts = detect_events(decompose(synthetic_replay(owners, scores)))
        assert counts.goals["L"] == 1
        assert counts.assists["L"] == 0

    def test_three_chains_two_intercepts(self):
        owners = [("L", 0)] * 3 + [("R", 0)] * 3 + [("L", 1)] * 3
        counts = detect_events(decompose(synthetic_replay(owners)))
        assert counts.intercepts["R"] == 1
        assert counts.intercepts["L"] == 1

    def test_counts_match_brute_force_scanner(self, pitch_3v3):
        for seed in range(60):
            replay = roll_random_replay(pitch_3v3, seed=seed)
            ours = detect_events(decompose(replay)).as_dict()
            oracle = scan_replay(replay.steps).as_dict()
            assert ours == oracle, f"seed {seed}"

    def test_assists_bounded_by_passes(self, pitch_3v3):
        for seed in range(10):
            replay = roll_random_replay(pitch_3v3, seed=seed)
            counts = detect_events(decompose(replay))
            for team in ("L", "R"):
                assert counts.assists[team] <= counts.passes[team]

    def test_prefix_analysis_monotone(self, pitch_3v3):
        replay = roll_random_replay(pitch_3v3, seed=8)
        last = None
        for upto in (10, 50, 100, len(replay.steps) - 1):
            counts = analyze_replay(replay, upto=upto).as_dict()
            if last is not None:
                for cat in counts:
                    for team in ("L", "R"):
                        assert counts[cat][team] >= last[cat][team]
            last = counts


class TestStyleRadar:
    def test_identical_policies_all_half(self):
        cfg = MiniPitchConfig(12, 8, 2, max_steps=60)
        pols = [built_in_ai(1), built_in_ai(1)]
        pols[1] = type(pols[1])(
            id="clone", kind=pols[1].kind, version=1,
            env_fingerprint=pols[1].env_fingerprint, data=pols[1].data,
        )
        radar = style_radar(pols, cfg, episodes_per_pair=4, seed=3)
        for pid in radar:
            for metric, value in radar[pid].items():
                assert value == 0.5, (pid, metric)

    def test_normalization_rules(self):
        raw = {
            "a": dict(win_rate=1.0, goals=2, passes=0, assists=0, intercepts=1, possession=0.7, chain_length=2.0),
            "b": dict(win_rate=0.0, goals=1, passes=4, assists=1, intercepts=1, possession=0.3, chain_length=1.0),
        }
        norm = normalize_metrics(raw)
        assert norm["a"]["passes"] == 0.0  # never passes -> minimum
        assert norm["b"]["passes"] == 1.0
        assert norm["a"]["intercepts"] == 0.5  # constant metric
        assert norm["a"]["win_rate"] == 1.0

    def test_vectors_in_unit_range(self):
        cfg = MiniPitchConfig(12, 8, 2, max_steps=60)
        pols = [built_in_ai(0), built_in_ai(2), scripted_policy("random")]
        radar = style_radar(pols, cfg, episodes_per_pair=2, seed=1)
        assert len(radar) == 3
        for pid in radar:
            assert len(radar[pid]) == 7
            for value in radar[pid].values():
                assert 0.0 <= value <= 1.0
        csv_text = radar_csv(radar)
        assert csv_text.splitlines()[0].startswith("policy,win_rate")


class TestCrossplay:
    def test_matrix_identities(self):
        cfg = MiniPitchConfig(12, 8, 1, max_steps=60)
        pols = [built_in_ai(0), built_in_ai(2), scripted_policy("idle")]
        cp = crossplay_matrix(pols, cfg, episodes_per_pair=4, seed=2)
        n = len(pols)
        ones = np.ones((n, n))
        np.testing.assert_allclose(cp.win + cp.win.T + cp.draw, ones, atol=1e-12)
        np.testing.assert_allclose(cp.draw, cp.draw.T, atol=1e-12)
        assert np.all(cp.win.sum(axis=1) <= n + 1e-9)

    def test_deterministic_self_play_symmetric(self):
        cfg = MiniPitchConfig(12, 8, 1, max_steps=60)
        pols = [built_in_ai(0)]
        cp = crossplay_matrix(pols, cfg, episodes_per_pair=4, seed=2)
        assert cp.win[0][0] == pytest.approx(cp.win[0][0])
        assert 2 * cp.win[0][0] + cp.draw[0][0] == pytest.approx(1.0)
