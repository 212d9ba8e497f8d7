"""Reward schemes: sparse scoring, dense scoring+checkpoint, and shaped
composites built from per-agent components.

Components (all computed per player per step, team-level values broadcast):

    scoring               +1 own goal, -1 conceded
    checkpoint            first entry into each of `checkpoint_count` bands
                          nested toward the opponent goal while owning the
                          ball; uncollected bands flush when a goal lands
    ball_player_distance  negative Euclidean distance player-to-ball
    goal_difference       own minus opponent goals, emitted at the final step
    possession            +1 gaining the ball from the other team, -1 losing
                          it to the other team
    role_scoring          scoring weighted by the player's role
    passing               +1 completed pass, -1 pass lost to the opponent
    assist                +1 at the goal step for the second-to-last player
                          of the scoring chain (shared chain analytics)

Two composite presets mirror the shaped trainings this framework targets:
`PRESSURE` = scoring + 0.1 * ball_player_distance + terminal goal
difference; `ASSIST_PLAY` = role-weighted scoring + 0.3 * assist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analysis.chains import ChainTracker
from .game.types import (
    GOAL,
    OWNERSHIP_CHANGE,
    PASS_ATTEMPT,
    PASS_COMPLETE,
    Event,
    MiniPitchConfig,
    RawObservation,
    Role,
    Team,
)

COMPONENT_NAMES = (
    "scoring",
    "checkpoint",
    "ball_player_distance",
    "goal_difference",
    "possession",
    "role_scoring",
    "passing",
    "assist",
)

DEFAULT_ROLE_WEIGHTS: dict[Role, tuple[float, float]] = {
    # (weight on scored goals, weight on conceded goals)
    Role.GK: (1.0, 1.0),
    Role.DEF: (0.5, 1.5),
    Role.MID: (1.0, 1.0),
    Role.FWD: (1.5, 0.5),
}


@dataclass(frozen=True)
class RewardConfig:
    scheme: str = "sparse"  # sparse | dense | composite
    components: tuple[tuple[str, float], ...] = ()
    role_weights: dict[Role, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_ROLE_WEIGHTS)
    )
    checkpoint_count: int = 10
    checkpoint_value: float = 0.1

    def __post_init__(self) -> None:
        if self.scheme not in ("sparse", "dense", "composite"):
            raise ValueError(f"unknown reward scheme {self.scheme!r}")
        if self.checkpoint_count < 1:
            raise ValueError("checkpoint_count must be at least 1")
        for name, coeff in self.components:
            if name not in COMPONENT_NAMES:
                raise ValueError(f"unknown reward component {name!r}")
            if not math.isfinite(coeff):
                raise ValueError("component coefficients must be finite")


PRESSURE = RewardConfig(
    scheme="composite",
    components=(
        ("scoring", 1.0),
        ("ball_player_distance", 0.1),
        ("goal_difference", 1.0),
    ),
)

ASSIST_PLAY = RewardConfig(
    scheme="composite",
    components=(("role_scoring", 1.0), ("assist", 0.3)),
)

# Default shaping for desk-scale best-response training: dense scoring plus
# a small pressuring term so a ball-less learner still has a gradient toward
# winning possession. The distance coefficient is kept small so that goals,
# not proximity, dominate an episode's return.
SHAPED = RewardConfig(
    scheme="composite",
    components=(
        ("scoring", 1.0),
        ("checkpoint", 1.0),
        ("ball_player_distance", 0.01),
        ("goal_difference", 1.0),
    ),
)


def config_for(scheme: str) -> RewardConfig:
    presets = {
        "sparse": RewardConfig("sparse"),
        "dense": RewardConfig("dense"),
        "pressure": PRESSURE,
        "assist": ASSIST_PLAY,
        "shaped": SHAPED,
    }
    if scheme not in presets:
        raise ValueError(f"unknown reward scheme {scheme!r}")
    return presets[scheme]


class ComponentTracker:
    """Streams every reward component for one team over an episode."""

    def __init__(self, team: Team, config: RewardConfig, pitch: MiniPitchConfig):
        self.team = team
        self.config = config
        self.pitch = pitch
        self.n = pitch.n_per_team
        self._collected: set[int] = set()
        self._chains = ChainTracker()
        self._last_possessing: Optional[Team] = None
        self._pending_pass: Optional[tuple[Team, int]] = None
        self._half_len = pitch.width / 2.0 - 1.0

    # -- per-step ------------------------------------------------------------

    def step(
        self, obs: RawObservation, events: Sequence[Event], done: bool
    ) -> dict[str, np.ndarray]:
        team, opp = self.team, self.team.other
        n = self.n
        out = {name: np.zeros(n) for name in COMPONENT_NAMES}

        goals_for = sum(1 for e in events if e.kind == GOAL and e.team is team)
        goals_against = sum(1 for e in events if e.kind == GOAL and e.team is opp)
        out["scoring"] += goals_for - goals_against

        out["checkpoint"] += self._checkpoint(obs, goals_for > 0)

        players = obs.players(team)
        ball = obs.ball
        for i, p in enumerate(players):
            out["ball_player_distance"][i] = -math.hypot(p.x - ball.x, p.y - ball.y)

        if done:
            own = obs.score[0] if team is Team.LEFT else obs.score[1]
            other = obs.score[1] if team is Team.LEFT else obs.score[0]
            out["goal_difference"] += own - other

        self._scan_events(events, out["possession"], out["passing"])
        self._role_scoring(goals_for, goals_against, players, out["role_scoring"])

        assist = self._chains.step(
            obs.step_index, obs.score, ball.owned_team, ball.owned_player
        )
        if assist is not None and assist.team is team:
            out["assist"][assist.player] += 1.0

        if ball.owned_team is not None:
            self._last_possessing = ball.owned_team
        return out

    # -- components ---------------------------------------------------------------

    def _checkpoint(self, obs: RawObservation, scored: bool) -> float:
        cfg = self.config
        count = cfg.checkpoint_count
        reward = 0.0
        ball = obs.ball
        if ball.owned_team is self.team:
            d = (
                (self.pitch.width - 1) - ball.x
                if self.team is Team.LEFT
                else ball.x
            )
            for k in range(1, count + 1):
                if k in self._collected:
                    continue
                if d < self._half_len * (count - k + 1) / count:
                    self._collected.add(k)
                    reward += cfg.checkpoint_value
        if scored:
            remaining = count - len(self._collected)
            self._collected = set(range(1, count + 1))
            reward += remaining * cfg.checkpoint_value
        return reward

    def _scan_events(
        self, events: Sequence[Event], possession: np.ndarray, passing: np.ndarray
    ) -> None:
        """Walk the step's events in order, tracking possession and passes."""
        possessing = self._last_possessing
        for e in events:
            if e.kind == PASS_ATTEMPT:
                self._pending_pass = (e.team, e.player)
            elif e.kind == PASS_COMPLETE:
                if e.team is self.team:
                    passing[e.player] += 1.0
                self._pending_pass = None
            elif e.kind == GOAL:
                self._pending_pass = None
            elif e.kind == OWNERSHIP_CHANGE:
                if e.team is self.team and possessing not in (None, self.team):
                    possession[e.player] += 1.0
                if e.team is not self.team and possessing is self.team:
                    if e.prev_team is self.team and e.prev_player is not None:
                        possession[e.prev_player] -= 1.0
                    elif (
                        e.prev_team is None
                        and self._pending_pass is not None
                        and self._pending_pass[0] is self.team
                    ):
                        # A mid-flight interception costs the passer.
                        possession[self._pending_pass[1]] -= 1.0
                if self._pending_pass is not None:
                    pteam, passer = self._pending_pass
                    if e.team is not pteam and pteam is self.team:
                        passing[passer] -= 1.0
                    self._pending_pass = None
                possessing = e.team

    def _role_scoring(
        self, goals_for: int, goals_against: int, players, stream: np.ndarray
    ) -> None:
        if not goals_for and not goals_against:
            return
        for i, p in enumerate(players):
            scored_w, conceded_w = self.config.role_weights.get(p.role, (1.0, 1.0))
            stream[i] += goals_for * scored_w - goals_against * conceded_w


class RewardTracker:
    """Per-step reward for one team under a `RewardConfig` scheme."""

    def __init__(self, team: Team, config: RewardConfig, pitch: MiniPitchConfig):
        self.config = config
        self._components = ComponentTracker(team, config, pitch)

    def step(
        self, obs: RawObservation, events: Sequence[Event], done: bool
    ) -> np.ndarray:
        comps = self._components.step(obs, events, done)
        if self.config.scheme == "sparse":
            return comps["scoring"]
        if self.config.scheme == "dense":
            return comps["scoring"] + comps["checkpoint"]
        total = np.zeros_like(comps["scoring"])
        for name, coeff in self.config.components:
            total += coeff * comps[name]
        return total


def scoring_reward(events: Sequence[Event], team: Team) -> float:
    """One step of the pure scoring signal: +1 scored, -1 conceded."""
    r = 0.0
    for e in events:
        if e.kind == GOAL:
            r += 1.0 if e.team is team else -1.0
    return r


def reward_streams(
    steps: Sequence[tuple[RawObservation, Sequence[Event]]],
    team: Team,
    config: RewardConfig,
    pitch: MiniPitchConfig,
) -> np.ndarray:
    """(players x steps) reward matrix for a finished episode."""
    tracker = RewardTracker(team, config, pitch)
    cols = [
        tracker.step(obs, events, done=(i == len(steps) - 1))
        for i, (obs, events) in enumerate(steps)
    ]
    return np.stack(cols, axis=1) if cols else np.zeros((pitch.n_per_team, 0))


def advanced_components(
    steps: Sequence[tuple[RawObservation, Sequence[Event]]],
    team: Team,
    config: RewardConfig,
    pitch: MiniPitchConfig,
) -> dict[str, np.ndarray]:
    """All component streams, each (players x steps)."""
    tracker = ComponentTracker(team, config, pitch)
    per_step = [
        tracker.step(obs, events, done=(i == len(steps) - 1))
        for i, (obs, events) in enumerate(steps)
    ]
    out = {}
    for name in COMPONENT_NAMES:
        cols = [c[name] for c in per_step]
        out[name] = (
            np.stack(cols, axis=1) if cols else np.zeros((pitch.n_per_team, 0))
        )
    return out
