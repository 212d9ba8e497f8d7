import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pitchlab.game import MiniPitch, MiniPitchConfig, Team
from pitchlab.learner import built_in_ai, scripted_policy
from pitchlab.orchestrator.rollout import play_match


@pytest.fixture
def pitch_3v3() -> MiniPitchConfig:
    return MiniPitchConfig(width=12, height=8, n_per_team=3, max_steps=200, seed=7)


@pytest.fixture
def pitch_1v1() -> MiniPitchConfig:
    return MiniPitchConfig(width=12, height=8, n_per_team=1, max_steps=100, seed=0)


def roll_random_replay(config: MiniPitchConfig, seed: int, opponent_difficulty: int = 1):
    """One recorded episode: random policy vs the scripted chaser."""
    env = MiniPitch(config)
    res = play_match(
        env,
        scripted_policy("random").start_episode(),
        built_in_ai(opponent_difficulty).start_episode(),
        seed=seed,
        record=True,
        policies=("random", f"built-in-d{opponent_difficulty}"),
    )
    return res.replay


def roll_observations(config: MiniPitchConfig, seeds, per_episode=None):
    """Stream post-step observations from random-vs-chaser episodes."""
    env = MiniPitch(config)
    from pitchlab.features import compute_action_mask
    from pitchlab.learner import scripted_policy as sp
    import numpy as np
    from pitchlab.game.types import mirror_action

    for seed in seeds:
        obs = env.reset(seed=seed)
        left = sp("random").start_episode()
        right = built_in_ai(0).start_episode()
        rng_l = np.random.default_rng((seed, 0))
        rng_r = np.random.default_rng((seed, 1))
        agents = env.controlled_indices(Team.LEFT)
        done = False
        count = 0
        yield obs
        while not done and (per_episode is None or count < per_episode):
            lv = obs
            rv = obs.mirror_view()
            lm = [compute_action_mask(lv, a) for a in agents]
            rm = [compute_action_mask(rv, a) for a in agents]
            la = left.act_team(lv, agents, lm, rng_l)
            ra = right.act_team(rv, agents, rm, rng_r)
            obs, _events, done = env.step(la, [mirror_action(a) for a in ra])
            count += 1
            yield obs
