"""Best-response oracles: exact argmax for matrix games and epsilon-greedy
tabular Q-learning for MiniPitch, plus the scripted opponents.

Policies are immutable snapshots: training always works on a private copy
and publishes a new `Policy` with a bumped version. A policy acts through a
per-episode actor (`policy.start_episode()`), which lets scripted opponents
keep a reaction-delay buffer without sharing state across episodes.

All policies see the pitch from their own team's view (use
`RawObservation.mirror_view()` for the right side), so one table or script
plays either side unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .features import ActionMask, compute_action_mask
from .game.matrix import MatrixGame
from .game.minipitch import MiniPitch
from .game.types import (
    BOTTOM,
    BOTTOM_LEFT,
    BOTTOM_RIGHT,
    IDLE,
    LEFT as ACT_LEFT,
    N_ACTIONS,
    RIGHT as ACT_RIGHT,
    SHOT,
    SLIDE,
    TOP,
    TOP_LEFT,
    TOP_RIGHT,
    RawObservation,
    Team,
    mirror_action,
)
from .rewards import RewardConfig, RewardTracker

POLICY_FORMAT = "policy/1"

_DELTA_TO_ACTION = {
    (-1, 0): ACT_LEFT,
    (-1, -1): TOP_LEFT,
    (0, -1): TOP,
    (1, -1): TOP_RIGHT,
    (1, 0): ACT_RIGHT,
    (1, 1): BOTTOM_RIGHT,
    (0, 1): BOTTOM,
    (-1, 1): BOTTOM_LEFT,
    (0, 0): IDLE,
}


def direction_toward(dx: float, dy: float) -> int:
    return _DELTA_TO_ACTION[(int(np.sign(dx)), int(np.sign(dy)))]


@dataclass(frozen=True)
class Policy:
    id: str
    kind: str  # scripted | tabular | matrix
    version: int
    env_fingerprint: str
    data: dict = field(default_factory=dict)

    def start_episode(self) -> "Actor":
        if self.kind == "scripted":
            return ScriptedActor(self.data["name"], int(self.data.get("difficulty", 0)))
        if self.kind == "tabular":
            return TabularActor(self.data)
        if self.kind == "matrix":
            return MatrixActor(np.asarray(self.data["mix"], dtype=float))
        raise ValueError(f"unknown policy kind {self.kind!r}")

    def mixed_strategy(self) -> np.ndarray:
        if self.kind != "matrix":
            raise ValueError("not a matrix-game policy")
        mix = np.asarray(self.data["mix"], dtype=float)
        if np.any(mix < 0) or abs(float(mix.sum()) - 1.0) > 1e-9:
            raise ValueError("mixed strategy must be a probability vector")
        return mix


def to_text(policy: Policy) -> str:
    header = {
        "format": POLICY_FORMAT,
        "id": policy.id,
        "kind": policy.kind,
        "version": policy.version,
        "env": policy.env_fingerprint,
    }
    return (
        json.dumps(header, sort_keys=True, separators=(",", ":"))
        + "\n"
        + json.dumps(policy.data, sort_keys=True, separators=(",", ":"))
        + "\n"
    )


def from_text(text: str) -> Policy:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("policy artifact must have a header and a body line")
    try:
        header = json.loads(lines[0])
        data = json.loads(lines[1])
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed policy artifact: {exc}") from exc
    if header.get("format") != POLICY_FORMAT:
        raise ValueError(f"unsupported policy format {header.get('format')!r}")
    return Policy(
        id=str(header["id"]),
        kind=str(header["kind"]),
        version=int(header["version"]),
        env_fingerprint=str(header["env"]),
        data=data,
    )


def choose_action(
    preferences: np.ndarray,
    mask: ActionMask,
    rng: np.random.Generator,
    epsilon: float = 0.0,
) -> int:
    """Greedy-with-epsilon over the masked-in actions, lowest index on ties."""
    allowed = mask.allowed_indices()
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(allowed[rng.integers(len(allowed))])
    sub = preferences[allowed]
    return int(allowed[int(np.argmax(sub))])


# -- actors ---------------------------------------------------------------------


class Actor:
    """Per-episode decision maker for one team."""

    def act_team(
        self,
        obs: RawObservation,
        agents: Sequence[int],
        masks: Sequence[ActionMask],
        rng: np.random.Generator,
    ) -> list[int]:
        raise NotImplementedError


class ScriptedActor(Actor):
    def __init__(self, name: str, difficulty: int = 0):
        if name not in ("idle", "chase", "random"):
            raise ValueError(f"unknown scripted behavior {name!r}")
        self.name = name
        self.difficulty = difficulty
        self._history: list[RawObservation] = []

    def act_team(self, obs, agents, masks, rng):
        if self.name == "idle":
            return [IDLE for _ in agents]
        if self.name == "random":
            return [
                int(m.allowed_indices()[rng.integers(len(m.allowed_indices()))])
                for m in masks
            ]
        self._history.append(obs)
        # Reaction delay: act on the observation from `difficulty` steps ago.
        seen = self._history[max(0, len(self._history) - 1 - self.difficulty)]
        return [
            self._chase(seen, agent, mask) for agent, mask in zip(agents, masks)
        ]

    def _chase(self, obs: RawObservation, agent: int, mask: ActionMask) -> int:
        w, h = obs.width, obs.height
        me = obs.players_left[agent]
        ball = obs.ball
        low, high = h // 2 - 1, h // 2
        mouth = (w - 1, min(max(me.y, low), high))
        candidates: list[int] = []
        if ball.owned_team is Team.LEFT and ball.owned_player == agent:
            # Drive all the way to point-blank range, where shots always land.
            if math.hypot(me.x - mouth[0], me.y - mouth[1]) <= 1.5:
                candidates.append(SHOT)
            candidates.append(direction_toward(mouth[0] - me.x, mouth[1] - me.y))
        elif ball.owned_team is Team.LEFT:
            candidates.append(direction_toward(mouth[0] - me.x, mouth[1] - me.y))
        elif ball.owned_team is Team.RIGHT:
            carrier = obs.players_right[ball.owned_player]
            if max(abs(carrier.x - me.x), abs(carrier.y - me.y)) <= 1:
                candidates.append(SLIDE)
            candidates.append(direction_toward(carrier.x - me.x, carrier.y - me.y))
        else:
            candidates.append(direction_toward(ball.x - me.x, ball.y - me.y))
        for act in candidates:
            if mask.allowed[act]:
                return act
        return IDLE


class TabularActor(Actor):
    def __init__(self, data: dict):
        self._q = data.get("q", {})
        self._sharing = bool(data.get("sharing", True))
        self._epsilon = float(data.get("act_epsilon", 0.0))

    def act_team(self, obs, agents, masks, rng):
        out = []
        for agent, mask in zip(agents, masks):
            key = state_key(obs, agent, self._sharing)
            row = self._q.get(key)
            prefs = (
                np.zeros(N_ACTIONS) if row is None else np.asarray(row, dtype=float)
            )
            out.append(choose_action(prefs, mask, rng, self._epsilon))
        return out


class MatrixActor(Actor):
    def __init__(self, mix: np.ndarray):
        self.mix = mix

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.choice(len(self.mix), p=self.mix))

    def act_team(self, obs, agents, masks, rng):
        raise TypeError("matrix policies act on matrix games, not on the pitch")


def scripted_policy(name: str, difficulty: int = 0, env_fingerprint: str = "") -> Policy:
    if name not in ("idle", "chase", "random"):
        raise ValueError(f"unknown scripted behavior {name!r}")
    pid = name if difficulty == 0 else f"{name}-d{difficulty}"
    return Policy(
        id=pid,
        kind="scripted",
        version=1,
        env_fingerprint=env_fingerprint,
        data={"name": name, "difficulty": difficulty},
    )


def built_in_ai(difficulty: int = 0, env_fingerprint: str = "") -> Policy:
    """The environment's scripted opponent; difficulty is reaction delay."""
    if difficulty not in (0, 1, 2):
        raise ValueError("difficulty must be 0, 1 or 2")
    return Policy(
        id=f"built-in-d{difficulty}",
        kind="scripted",
        version=1,
        env_fingerprint=env_fingerprint,
        data={"name": "chase", "difficulty": difficulty},
    )


# -- state abstraction ---------------------------------------------------------


def state_key(obs: RawObservation, agent: int, sharing: bool) -> str:
    """Coarse discretization: my cell, ball cell, ownership, mode, nearest
    opponent offset, and the agent identity under parameter sharing."""
    me = obs.players_left[agent]
    b = obs.ball
    if b.owned_team is None:
        own = 0
    elif b.owned_team is Team.LEFT:
        own = 1 if b.owned_player == agent else 2
    else:
        own = 3
    nearest = min(
        obs.players_right,
        key=lambda p: (math.hypot(p.x - me.x, p.y - me.y)),
        default=None,
    )
    sdx = int(np.sign(nearest.x - me.x)) if nearest else 0
    sdy = int(np.sign(nearest.y - me.y)) if nearest else 0
    ident = f"|a{agent}" if sharing else ""
    return (
        f"{me.x // 2},{me.y // 2}|{b.x // 2},{b.y // 2}|o{own}"
        f"|m{obs.game_mode.value}|{sdx},{sdy}{ident}"
    )


# -- Q-learning ---------------------------------------------------------------


@dataclass(frozen=True)
class LearnerConfig:
    learning_rate: float = 0.1
    epsilon: float = 0.2
    epsilon_final: float = 0.02
    gamma: float = 0.99
    parameter_sharing: bool = True
    step_budget: int = 100_000

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        for eps in (self.epsilon, self.epsilon_final):
            if not 0.0 <= eps <= 1.0:
                raise ValueError("epsilon must lie in [0, 1]")
        if self.step_budget < 0:
            raise ValueError("step budget cannot be negative")


class QTable:
    """Mutable action-value table over string state keys."""

    def __init__(self, initial: Optional[dict] = None):
        self.q: dict[str, np.ndarray] = {}
        if initial:
            for k, v in initial.items():
                self.q[k] = np.asarray(v, dtype=float).copy()

    def row(self, key: str) -> np.ndarray:
        row = self.q.get(key)
        if row is None:
            row = np.zeros(N_ACTIONS)
            self.q[key] = row
        return row

    def best_value(self, key: str, allowed: Sequence[int]) -> float:
        row = self.q.get(key)
        if row is None:
            return 0.0
        return float(np.max(row[list(allowed)]))

    def update(
        self,
        key: str,
        action: int,
        reward: float,
        next_key: Optional[str],
        next_allowed: Sequence[int],
        done: bool,
        lr: float,
        gamma: float,
    ) -> None:
        target = reward
        if not done and next_key is not None:
            target += gamma * self.best_value(next_key, next_allowed)
        row = self.row(key)
        row[action] += lr * (target - row[action])

    def serialize(self) -> dict[str, list[float]]:
        return {k: [float(x) for x in v] for k, v in sorted(self.q.items())}


@dataclass
class TrainResult:
    policy: Policy
    episodes: int
    env_steps: int
    opponent_log: list[str]
    win_history: list[float]  # 1 win / 0.5 draw / 0 loss per episode
    stopped_early: bool = False


OpponentSampler = Callable[[int], tuple[str, Actor]]


def train_best_response(
    env_factory: Callable[[], MiniPitch],
    opponent_sampler: OpponentSampler,
    config: LearnerConfig,
    reward_config: RewardConfig,
    prior: Optional[Policy] = None,
    seed: int = 0,
    policy_id: str = "br",
    stop_win_rate: Optional[float] = None,
    stop_window: int = 100,
) -> TrainResult:
    """Epsilon-greedy tabular Q-learning against freshly sampled opponents.

    The learner controls the left team; opponents see the mirrored view.
    With a zero step budget the prior (or a blank policy) is returned
    unchanged, version-bumped only when training actually ran.
    """
    env = env_factory()
    fingerprint = env.fingerprint()
    if prior is not None and prior.kind == "tabular":
        table = QTable(prior.data.get("q", {}))
    else:
        table = QTable()
    prior_version = prior.version if prior is not None else 0

    if config.step_budget <= 0:
        if prior is not None:
            return TrainResult(prior, 0, 0, [], [], stopped_early=False)
        return TrainResult(
            _tabular_policy(policy_id, 1, fingerprint, table, config),
            0,
            0,
            [],
            [],
        )

    agents = env.controlled_indices(Team.LEFT)
    steps_done = 0
    episodes = 0
    opponent_log: list[str] = []
    win_history: list[float] = []
    stopped_early = False

    while steps_done < config.step_budget:
        opp_id, opp_actor = opponent_sampler(episodes)
        opponent_log.append(opp_id)
        ep_seed = (seed * 1_000_003 + episodes) & 0x7FFFFFFFFFFFFFFF
        rng = np.random.default_rng((seed, episodes))
        # Alternate sides so the table covers both the kickoff and the
        # chasing role; the learner always reasons in its own view.
        side = Team.LEFT if episodes % 2 == 0 else Team.RIGHT
        obs = env.reset(seed=ep_seed)
        tracker = RewardTracker(side, reward_config, env.config)
        done = False
        while not done and steps_done < config.step_budget:
            frac = steps_done / config.step_budget
            epsilon = config.epsilon + (config.epsilon_final - config.epsilon) * frac
            my_view = obs if side is Team.LEFT else obs.mirror_view()
            opp_view = obs.mirror_view() if side is Team.LEFT else obs
            keys, acts = [], []
            for agent in agents:
                mask = compute_action_mask(my_view, agent)
                key = state_key(my_view, agent, config.parameter_sharing)
                keys.append(key)
                acts.append(choose_action(table.row(key), mask, rng, epsilon))
            opp_masks = [compute_action_mask(opp_view, a) for a in agents]
            opp_acts = opp_actor.act_team(opp_view, agents, opp_masks, rng)
            if side is Team.LEFT:
                left_acts, right_acts = acts, [mirror_action(a) for a in opp_acts]
            else:
                left_acts, right_acts = opp_acts, [mirror_action(a) for a in acts]
            obs, events, done = env.step(left_acts, right_acts)
            rewards_all = tracker.step(obs, events, done)
            next_view = obs if side is Team.LEFT else obs.mirror_view()
            for slot, agent in enumerate(agents):
                next_key = state_key(next_view, agent, config.parameter_sharing)
                next_mask = compute_action_mask(next_view, agent)
                table.update(
                    keys[slot],
                    acts[slot],
                    float(rewards_all[agent]),
                    next_key,
                    next_mask.allowed_indices(),
                    done,
                    config.learning_rate,
                    config.gamma,
                )
            steps_done += 1
        episodes += 1
        my_goals = obs.score[0] if side is Team.LEFT else obs.score[1]
        their_goals = obs.score[1] if side is Team.LEFT else obs.score[0]
        diff = my_goals - their_goals
        win_history.append(1.0 if diff > 0 else (0.5 if diff == 0 else 0.0))
        if stop_win_rate is not None and len(win_history) >= stop_window:
            recent = win_history[-stop_window:]
            if sum(recent) / stop_window >= stop_win_rate:
                stopped_early = True
                break

    policy = _tabular_policy(
        policy_id, prior_version + 1, fingerprint, table, config
    )
    return TrainResult(
        policy, episodes, steps_done, opponent_log, win_history, stopped_early
    )


def _tabular_policy(
    policy_id: str,
    version: int,
    fingerprint: str,
    table: QTable,
    config: LearnerConfig,
) -> Policy:
    return Policy(
        id=policy_id,
        kind="tabular",
        version=version,
        env_fingerprint=fingerprint,
        data={"q": table.serialize(), "sharing": config.parameter_sharing},
    )


# -- exact best response -----------------------------------------------------


def best_response_exact(
    game: MatrixGame, opponent_mix: Sequence[float], policy_id: str = "br"
) -> Policy:
    """Pure strategy maximizing expected payoff against a column mixture."""
    mix = np.asarray(opponent_mix, dtype=float)
    if mix.shape != (game.n_cols,):
        raise ValueError(
            f"opponent mix has {mix.shape[0] if mix.ndim else 0} entries, "
            f"expected {game.n_cols}"
        )
    values = game.payoff @ mix
    row = int(np.argmax(values))
    one_hot = [0.0] * game.n_rows
    one_hot[row] = 1.0
    return Policy(
        id=policy_id,
        kind="matrix",
        version=1,
        env_fingerprint=game.fingerprint(),
        data={"mix": one_hot},
    )


def pure_matrix_policy(game: MatrixGame, row: int, policy_id: str) -> Policy:
    one_hot = [0.0] * game.n_rows
    one_hot[row] = 1.0
    return Policy(
        id=policy_id,
        kind="matrix",
        version=1,
        env_fingerprint=game.fingerprint(),
        data={"mix": one_hot},
    )
