import math

import numpy as np
import pytest

from pitchlab.features import (
    ActionMask,
    complex_layout,
    complex_length,
    compute_action_mask,
    encode_complex,
    encode_simple,
    simple_layout,
    simple_length,
)
from pitchlab.game import MiniPitch, MiniPitchConfig, GameMode, Team
from pitchlab.game.types import (
    BallState,
    DRIBBLE,
    HIGH_PASS,
    IDLE,
    LONG_PASS,
    PASS_ACTIONS,
    PlayerState,
    RawObservation,
    Role,
    SHORT_PASS,
    SHOT,
    SLIDE,
)

from conftest import roll_observations


def make_obs(
    ball: BallState,
    left_positions,
    right_positions,
    mode: GameMode = GameMode.NORMAL,
    width: int = 12,
    height: int = 8,
    roles=None,
) -> RawObservation:
    n = len(left_positions)
    roles = roles or [Role.MID] * n
    return RawObservation(
        step_index=5,
        steps_left=95,
        score=(0, 0),
        game_mode=mode,
        ball=ball,
        players_left=tuple(
            PlayerState(x=x, y=y, role=roles[i]) for i, (x, y) in enumerate(left_positions)
        ),
        players_right=tuple(
            PlayerState(x=x, y=y, role=roles[i]) for i, (x, y) in enumerate(right_positions)
        ),
        width=width,
        height=height,
    )


class TestLengths:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_simple_block_formula(self, n):
        layout = simple_layout(n)
        assert sum(b.length for b in layout) == simple_length(n) == 9 * n + 14

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_complex_block_formula(self, n):
        layout = complex_layout(n)
        assert sum(b.length for b in layout) == complex_length(n) == 15 * n + 63

    def test_simple_3v3_example(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        obs = env.reset(seed=7)
        assert encode_simple(obs, 1).length == 4 * 6 + 6 + 3 + 5 + 3 == 41

    def test_complex_blocks_in_order(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        fv = encode_complex(env.reset(seed=7), 1)
        names = [b.name for b in fv.layout]
        assert names == [
            "player_state",
            "ball_state",
            "available_actions",
            "closest_teammate",
            "closest_opponent",
            "teammates",
            "opponents",
            "identity",
        ]
        lengths = [b.length for b in fv.layout]
        assert lengths == [19, 18, 19, 7, 7, 14, 21, 3]

    def test_lengths_for_all_team_sizes(self):
        for n in range(1, 6):
            cfg = MiniPitchConfig(12, 8, n, max_steps=50)
            env = MiniPitch(cfg)
            obs = env.reset(seed=1)
            agent = env.controlled_indices(Team.LEFT)[0]
            assert encode_simple(obs, agent).length == simple_length(n)
            assert encode_complex(obs, agent).length == complex_length(n)


class TestEncoding:
    def test_invalid_agent(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        obs = env.reset(seed=7)
        with pytest.raises(ValueError):
            encode_simple(obs, 0)  # goalkeeper
        with pytest.raises(ValueError):
            encode_simple(obs, 3)

    def test_unowned_ball_one_hot(self):
        obs = make_obs(
            BallState(x=5, y=5), [(2, 2)], [(9, 2)], width=12, height=8
        )
        fv = encode_simple(obs, 0)
        assert list(fv.block("ownership")) == [1.0, 0.0, 0.0]

    def test_layout_stable_across_content(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        a = encode_complex(env.reset(seed=1), 1)
        env.step([5, 5], [5, 5])
        b = encode_complex(env._observation(), 1)
        assert a.layout == b.layout

    def test_available_actions_block_equals_mask(self, pitch_3v3):
        for obs in roll_observations(pitch_3v3, seeds=[5], per_episode=40):
            for agent in (1, 2):
                fv = encode_complex(obs, agent)
                mask = compute_action_mask(obs, agent)
                assert list(fv.block("available_actions")) == list(mask.as_floats())

    def test_closest_teammate_distance_single_candidate(self):
        obs = make_obs(
            BallState(x=5, y=5),
            [(2, 2), (2, 3)],
            [(9, 2), (9, 3)],
        )
        fv = encode_complex(obs, 0)
        diag = math.hypot(11, 7)
        assert fv.block("closest_teammate")[5] == pytest.approx(1.0 / diag)

    def test_finiteness_and_position_bounds(self, pitch_3v3):
        count = 0
        for obs in roll_observations(pitch_3v3, seeds=range(4)):
            for agent in (1, 2):
                for fv in (encode_simple(obs, agent), encode_complex(obs, agent)):
                    assert np.all(np.isfinite(fv.values))
                pos = encode_simple(obs, agent).block("players")
                assert np.all(pos >= -1.0) and np.all(pos <= 1.0)
            count += 1
        assert count > 100

    def test_mirror_invariance_elementwise(self, pitch_3v3):
        # The right team's encoding of the true state must equal the left
        # team's encoding of the mirrored state, elementwise.
        for obs in roll_observations(pitch_3v3, seeds=[11], per_episode=60):
            mirrored = obs.mirror_view()
            for agent in (1, 2):
                right_enc = encode_simple(mirrored, agent)
                again = encode_simple(mirrored.mirror_view().mirror_view(), agent)
                assert np.array_equal(right_enc.values, again.values)
        # Symmetric state (odd width, ball on the center column): the two
        # sides' encodings coincide exactly.
        obs = make_obs(BallState(x=6, y=4), [(3, 4)], [(9, 4)], width=13)
        sym = encode_simple(obs, 0)
        mirrored = encode_simple(obs.mirror_view(), 0)
        np.testing.assert_allclose(sym.values, mirrored.values, atol=1e-12)

    def test_layout_schema_text(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        fv = encode_complex(env.reset(seed=7), 1)
        schema = fv.layout_schema()
        assert schema.startswith("# block\toffset\tlength")
        assert "available_actions\t37\t19" in schema


def mask_of(obs, agent=0):
    return compute_action_mask(obs, agent)


class TestMaskRules:
    def test_opponent_possession_disables_ball_actions(self):
        obs = make_obs(
            BallState(x=9, y=4, owned_team=Team.RIGHT, owned_player=0),
            [(5, 4)],
            [(9, 4)],
        )
        mask = mask_of(obs)
        for act in (*PASS_ACTIONS, SHOT, DRIBBLE):
            assert not mask.allowed[act]
        assert mask.allowed[IDLE]

    def test_loose_far_ball_disables_ball_actions(self):
        obs = make_obs(BallState(x=11, y=7), [(1, 1)], [(6, 4)])
        mask = mask_of(obs)
        for act in (*PASS_ACTIONS, SHOT, DRIBBLE):
            assert not mask.allowed[act]

    def test_loose_near_ball_keeps_dribble(self):
        obs = make_obs(BallState(x=2, y=1), [(1, 1)], [(9, 4)])
        assert mask_of(obs).allowed[DRIBBLE]

    def test_own_possession_disables_slide(self):
        obs = make_obs(
            BallState(x=5, y=4, owned_team=Team.LEFT, owned_player=0),
            [(5, 4)],
            [(9, 4)],
        )
        assert not mask_of(obs).allowed[SLIDE]

    def test_far_from_penalty_area_disables_shot(self):
        obs = make_obs(
            BallState(x=2, y=4, owned_team=Team.LEFT, owned_player=0),
            [(2, 4)],
            [(9, 4)],
        )
        assert not mask_of(obs).allowed[SHOT]

    def test_inside_box_disables_lofted_passes_keeps_shot(self):
        obs = make_obs(
            BallState(x=10, y=4, owned_team=Team.LEFT, owned_player=0),
            [(10, 4), (5, 4)],
            [(1, 4), (2, 2)],
        )
        mask = mask_of(obs, agent=0)
        assert not mask.allowed[HIGH_PASS]
        assert not mask.allowed[LONG_PASS]
        assert mask.allowed[SHOT]
        assert mask.allowed[SHORT_PASS]

    def test_teammate_possession_far_away_disables_my_ball_actions(self):
        obs = make_obs(
            BallState(x=10, y=6, owned_team=Team.LEFT, owned_player=1),
            [(1, 1), (10, 6)],
            [(6, 4), (7, 2)],
        )
        mask = mask_of(obs, agent=0)
        for act in (*PASS_ACTIONS, SHOT, DRIBBLE):
            assert not mask.allowed[act]
        near = mask_of(obs, agent=1)
        assert near.allowed[SHORT_PASS]

    def test_penalty_mode_taker_shot_only(self):
        obs = make_obs(
            BallState(x=9, y=4, owned_team=Team.LEFT, owned_player=0),
            [(9, 4), (3, 3)],
            [(2, 4), (3, 5)],
            mode=GameMode.PENALTY,
        )
        taker = mask_of(obs, agent=0)
        assert taker.allowed[SHOT] and taker.allowed[IDLE]
        assert sum(taker.allowed) == 2
        other = mask_of(obs, agent=1)
        assert other.allowed[IDLE] and sum(other.allowed) == 1

    def test_corner_mode_taker_passes_only(self):
        obs = make_obs(
            BallState(x=11, y=0, owned_team=Team.LEFT, owned_player=0),
            [(11, 0), (8, 4)],
            [(2, 4), (3, 5)],
            mode=GameMode.CORNER,
        )
        taker = mask_of(obs, agent=0)
        assert taker.allowed[SHORT_PASS]
        assert not taker.allowed[SHOT]

    def test_idle_always_allowed_property(self, pitch_3v3):
        for obs in roll_observations(pitch_3v3, seeds=[2], per_episode=60):
            for agent in (1, 2):
                mask = compute_action_mask(obs, agent)
                assert mask.allowed[IDLE]
                assert any(mask.allowed)

    def test_mask_requires_valid_agent(self, pitch_3v3):
        env = MiniPitch(pitch_3v3)
        obs = env.reset(seed=7)
        with pytest.raises(ValueError):
            compute_action_mask(obs, 0)


class TestActionMaskType:
    def test_rejects_all_false(self):
        with pytest.raises(ValueError):
            ActionMask(tuple([False] * 19))

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            ActionMask((True,) * 18)
