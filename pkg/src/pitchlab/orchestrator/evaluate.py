"""Head-to-head evaluation with side swapping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..game.matrix import MatrixGame
from ..game.minipitch import MiniPitch
from ..game.types import MiniPitchConfig, Team
from ..analysis.replay import Replay
from ..learner import Policy
from .rollout import play_match
from .tasks import stable_seed


@dataclass
class EvalResult:
    win_rate: float
    draw_rate: float
    loss_rate: float
    mean_goal_diff: float
    episodes: int
    replays: list[tuple[Replay, Team]] = field(default_factory=list)
    # replays carry which side policy A played, for style analytics

    @property
    def wins(self) -> float:
        return self.win_rate * self.episodes

    @property
    def draws(self) -> float:
        return self.draw_rate * self.episodes

    @property
    def losses(self) -> float:
        return self.loss_rate * self.episodes


def evaluate(
    policy_a: Policy,
    policy_b: Policy,
    episodes: int,
    config: MiniPitchConfig,
    seed: int = 0,
    record: bool = False,
) -> EvalResult:
    """k independent seeded episodes; A starts on the left and the sides
    swap every other episode so neither policy keeps a pitch advantage.
    Each side-swapped pair (2i, 2i+1) shares one environment seed, so a
    mirror match between identical deterministic policies cancels exactly.
    """
    if episodes <= 0:
        raise ValueError("need at least one evaluation episode")
    env = MiniPitch(config)
    wins = draws = losses = 0
    gd_total = 0.0
    replays: list[tuple[Replay, Team]] = []
    for e in range(episodes):
        a_left = e % 2 == 0
        left = policy_a if a_left else policy_b
        right = policy_b if a_left else policy_a
        ep_seed = stable_seed(seed, e // 2, policy_a.id, policy_b.id)
        result = play_match(
            env,
            left.start_episode(),
            right.start_episode(),
            seed=ep_seed,
            record=record,
            policies=(left.id, right.id),
        )
        diff = result.score[0] - result.score[1]
        if not a_left:
            diff = -diff
        gd_total += diff
        if diff > 0:
            wins += 1
        elif diff == 0:
            draws += 1
        else:
            losses += 1
        if record and result.replay is not None:
            replays.append((result.replay, Team.LEFT if a_left else Team.RIGHT))
    return EvalResult(
        win_rate=wins / episodes,
        draw_rate=draws / episodes,
        loss_rate=losses / episodes,
        mean_goal_diff=gd_total / episodes,
        episodes=episodes,
        replays=replays,
    )


def evaluate_matrix(
    policy_a: Policy, policy_b: Policy, game: MatrixGame
) -> tuple[float, float, float, float]:
    """Exact expected (win, draw, loss, payoff) of A's mixture vs B's.

    Matrix populations are evaluated in expectation rather than by
    sampling: the game is known, so the payoff entries carry no noise.
    """
    pa = policy_a.mixed_strategy()
    pb = policy_b.mixed_strategy()
    a = game.payoff
    joint = np.outer(pa, pb)
    wins = float(joint[a > 0].sum())
    draws = float(joint[a == 0].sum())
    losses = float(joint[a < 0].sum())
    value = float(pa @ a @ pb)
    return wins, draws, losses, value
