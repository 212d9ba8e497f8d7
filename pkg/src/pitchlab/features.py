"""Feature encoders and per-agent action masks.

Both encoders take an observation expressed in the acting team's own view
(use `RawObservation.mirror_view()` for the right team), so a policy always
sees itself attacking toward growing x. Block layouts depend only on the
team size n, never on the observation content.

Simple encoder blocks (length 9n + 14):
    players      8n   position + direction of all 2n players, own team first
    ball          6   position, direction, height, owner index
    ownership     3   one-hot: loose / own team / opponent
    game_mode     5   one-hot
    active        n   one-hot over my team

Complex encoder blocks (length 15n + 63):
    player_state     19
    ball_state       18
    available_actions 19
    closest_teammate  7
    closest_opponent  7
    teammates      7(n-1)
    opponents        7n
    identity          n

The qualitative distance thresholds live in `MaskThresholds` so tests can
pin them: the loose ball is "far" beyond a third of the pitch width, and a
shot is in range within penalty-area depth + 2 cells of the goal mouth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .game.types import (
    DIRECTION_DELTAS,
    DRIBBLE,
    GAME_MODES,
    HIGH_PASS,
    IDLE,
    LONG_PASS,
    N_ACTIONS,
    PASS_ACTIONS,
    SHORT_PASS,
    SHOT,
    SLIDE,
    GameMode,
    PlayerState,
    RawObservation,
    Role,
    Team,
)

ROLE_ORDER = (Role.GK, Role.DEF, Role.MID, Role.FWD)


@dataclass(frozen=True)
class Block:
    name: str
    offset: int
    length: int


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    layout: tuple[Block, ...]

    def block(self, name: str) -> np.ndarray:
        for b in self.layout:
            if b.name == name:
                return self.values[b.offset : b.offset + b.length]
        raise KeyError(name)

    @property
    def length(self) -> int:
        return int(self.values.shape[0])

    def layout_schema(self) -> str:
        lines = ["# block\toffset\tlength"]
        for b in self.layout:
            lines.append(f"{b.name}\t{b.offset}\t{b.length}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ActionMask:
    allowed: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.allowed) != N_ACTIONS:
            raise ValueError("mask must cover all actions")
        if not any(self.allowed):
            raise ValueError("mask must allow at least one action")

    def as_floats(self) -> np.ndarray:
        return np.array([1.0 if a else 0.0 for a in self.allowed])

    def allowed_indices(self) -> list[int]:
        return [i for i, a in enumerate(self.allowed) if a]


@dataclass(frozen=True)
class MaskThresholds:
    """Distance cut-offs for the qualitative masking rules."""

    far_ball_fraction: float = 1.0 / 3.0  # of pitch width
    shot_range_margin: int = 2  # cells beyond the penalty-area depth


DEFAULT_THRESHOLDS = MaskThresholds()


def simple_layout(n: int) -> tuple[Block, ...]:
    blocks = []
    offset = 0
    for name, length in (
        ("players", 8 * n),
        ("ball", 6),
        ("ownership", 3),
        ("game_mode", len(GAME_MODES)),
        ("active", n),
    ):
        blocks.append(Block(name, offset, length))
        offset += length
    return tuple(blocks)


def complex_layout(n: int) -> tuple[Block, ...]:
    blocks = []
    offset = 0
    for name, length in (
        ("player_state", 19),
        ("ball_state", 18),
        ("available_actions", N_ACTIONS),
        ("closest_teammate", 7),
        ("closest_opponent", 7),
        ("teammates", 7 * (n - 1)),
        ("opponents", 7 * n),
        ("identity", n),
    ):
        blocks.append(Block(name, offset, length))
        offset += length
    return tuple(blocks)


def simple_length(n: int) -> int:
    return 9 * n + 14


def complex_length(n: int) -> int:
    return 15 * n + 63


def _check_agent(obs: RawObservation, agent: int) -> None:
    n = len(obs.players_left)
    if not 0 <= agent < n:
        raise ValueError(f"agent index {agent} out of range for {n} players")
    if obs.players_left[agent].role is Role.GK:
        raise ValueError("goalkeepers are environment-controlled, not encodable agents")


def _nx(x: float, w: int) -> float:
    return 2.0 * x / (w - 1) - 1.0 if w > 1 else 0.0


def _ny(y: float, h: int) -> float:
    return 2.0 * y / (h - 1) - 1.0 if h > 1 else 0.0


def _ndir(d: float) -> float:
    return d / 2.0


def _speed(p: PlayerState) -> float:
    return math.hypot(p.dx, p.dy) / (2.0 * math.sqrt(2.0))


def _zone_one_hot(x: int, y: int, w: int, h: int) -> list[float]:
    col = min(2, 3 * x // w)
    row = min(1, 2 * y // h)
    zone = row * 3 + col
    return [1.0 if i == zone else 0.0 for i in range(6)]


def encode_simple(obs: RawObservation, agent: int) -> FeatureVector:
    _check_agent(obs, agent)
    n = len(obs.players_left)
    w, h = obs.width, obs.height
    vals: list[float] = []
    for p in obs.players_left + obs.players_right:
        vals += [_nx(p.x, w), _ny(p.y, h), _ndir(p.dx), _ndir(p.dy)]
    b = obs.ball
    owner_frac = 0.0 if b.owned_player is None else (b.owned_player + 1) / n
    vals += [_nx(b.x, w), _ny(b.y, h), _ndir(b.dx), _ndir(b.dy), float(b.high), owner_frac]
    vals += [
        1.0 if b.owned_team is None else 0.0,
        1.0 if b.owned_team is Team.LEFT else 0.0,
        1.0 if b.owned_team is Team.RIGHT else 0.0,
    ]
    vals += [1.0 if obs.game_mode is m else 0.0 for m in GAME_MODES]
    vals += [1.0 if i == agent else 0.0 for i in range(n)]
    return FeatureVector(np.array(vals, dtype=float), simple_layout(n))


def _relative_block(me: PlayerState, other: Optional[PlayerState], w: int, h: int) -> list[float]:
    """7 values: relative position, direction, speed, distance, tired flag."""
    if other is None:
        return [0.0] * 7
    diag = math.hypot(w - 1, h - 1)
    return [
        (other.x - me.x) / max(w - 1, 1),
        (other.y - me.y) / max(h - 1, 1),
        _ndir(other.dx),
        _ndir(other.dy),
        _speed(other),
        math.hypot(other.x - me.x, other.y - me.y) / diag,
        1.0 if other.tired else 0.0,
    ]


def _closest(me: PlayerState, others: list[tuple[int, PlayerState]]) -> Optional[PlayerState]:
    if not others:
        return None
    return min(
        others, key=lambda ip: (math.hypot(ip[1].x - me.x, ip[1].y - me.y), ip[0])
    )[1]


def encode_complex(
    obs: RawObservation, agent: int, thresholds: MaskThresholds = DEFAULT_THRESHOLDS
) -> FeatureVector:
    _check_agent(obs, agent)
    n = len(obs.players_left)
    w, h = obs.width, obs.height
    me = obs.players_left[agent]
    b = obs.ball
    owns_ball = b.owned_team is Team.LEFT and b.owned_player == agent

    vals: list[float] = []
    # player_state (19)
    vals += [_nx(me.x, w), _ny(me.y, h), _ndir(me.dx), _ndir(me.dy), _speed(me)]
    vals += [1.0 if me.role is r else 0.0 for r in ROLE_ORDER]
    vals += [
        1.0 if me.tired else 0.0,
        1.0 if me.sprinting else 0.0,
        1.0 if me.dribbling else 0.0,
        1.0 if owns_ball else 0.0,
    ]
    vals += _zone_one_hot(me.x, me.y, w, h)
    # ball_state (18)
    vals += [_nx(b.x, w), _ny(b.y, h)]
    vals += _zone_one_hot(b.x, b.y, w, h)
    vals += [
        (b.x - me.x) / max(w - 1, 1),
        (b.y - me.y) / max(h - 1, 1),
        _ndir(b.dx),
        _ndir(b.dy),
        math.hypot(b.dx, b.dy) / (2.0 * math.sqrt(2.0)),
        1.0 if b.high else 0.0,
        1.0 if b.owned_team is None else 0.0,
        1.0 if b.owned_team is Team.LEFT else 0.0,
        1.0 if b.owned_team is Team.RIGHT else 0.0,
        1.0 if owns_ball else 0.0,
    ]
    # available actions (19)
    mask = compute_action_mask(obs, agent, thresholds)
    vals += list(mask.as_floats())
    # closest teammate / opponent (7 + 7)
    teammates = [
        (i, p) for i, p in enumerate(obs.players_left) if i != agent
    ]
    opponents = list(enumerate(obs.players_right))
    vals += _relative_block(me, _closest(me, teammates), w, h)
    vals += _relative_block(me, _closest(me, opponents), w, h)
    # global teammates 7(n-1), ordered by index
    for _, p in teammates:
        vals += _relative_block(me, p, w, h)
    # global opponents 7n
    for _, p in opponents:
        vals += _relative_block(me, p, w, h)
    # identity one-hot
    vals += [1.0 if i == agent else 0.0 for i in range(n)]
    return FeatureVector(np.array(vals, dtype=float), complex_layout(n))


def compute_action_mask(
    obs: RawObservation, agent: int, thresholds: MaskThresholds = DEFAULT_THRESHOLDS
) -> ActionMask:
    """Apply the masking rule groups for one controlled agent.

    Rules, in order: opponent possession kills ball actions; a distant
    loose ball does too; own-team possession forbids sliding; shots only
    near the opponent penalty area; no lofted passes from inside it; a
    teammate's possession far away freezes my ball actions; set pieces
    restrict everyone but the taker.
    """
    _check_agent(obs, agent)
    n = len(obs.players_left)
    w, h = obs.width, obs.height
    me = obs.players_left[agent]
    b = obs.ball
    allowed = [True] * N_ACTIONS

    ball_actions = (*PASS_ACTIONS, SHOT, DRIBBLE)
    far_threshold = w * thresholds.far_ball_fraction
    penalty_depth = max(2, w // 4)
    shot_range = float(penalty_depth + thresholds.shot_range_margin)

    def disable(*acts: int) -> None:
        for a in acts:
            if a != IDLE:
                allowed[a] = False

    # 1. Opponent team owns the ball.
    if b.owned_team is Team.RIGHT:
        disable(*ball_actions)
    # 2. Loose ball far from my team.
    if b.owned_team is None:
        min_d = min(
            math.hypot(p.x - b.x, p.y - b.y) for p in obs.players_left
        )
        if min_d > far_threshold:
            disable(*ball_actions)
    # 3. My team owns the ball.
    if b.owned_team is Team.LEFT:
        disable(SLIDE)
    # 4. Ball too far from the opponent penalty area.
    low, high = h // 2 - 1, h // 2
    mouth_y = min(max(b.y, low), high)
    if math.hypot(b.x - (w - 1), b.y - mouth_y) > shot_range:
        disable(SHOT)
    # 5. Inside the opponent penalty area: no lofted passes.
    in_box = me.x >= w - penalty_depth and (low - 1) <= me.y <= (high + 1)
    if in_box:
        disable(HIGH_PASS, LONG_PASS)
    # 6. A teammate owns the ball far away from me.
    if b.owned_team is Team.LEFT and b.owned_player != agent:
        if math.hypot(b.x - me.x, b.y - me.y) > far_threshold:
            disable(*ball_actions)
    # No pass targets exist for a one-player team.
    if n == 1:
        disable(*PASS_ACTIONS)
    # 7. Set pieces: only the taker plays, with a mode-specific repertoire.
    if obs.game_mode is not GameMode.NORMAL:
        taker = b.owned_team is Team.LEFT and b.owned_player == agent
        if not taker:
            allow: set[int] = {IDLE}
        else:
            allow = {
                GameMode.KICK_OFF: {IDLE, *DIRECTION_DELTAS, *PASS_ACTIONS},
                GameMode.FREE_KICK: {IDLE, *PASS_ACTIONS, SHOT},
                GameMode.CORNER: {IDLE, *PASS_ACTIONS},
                GameMode.PENALTY: {IDLE, SHOT},
            }[obs.game_mode]
        for a in range(N_ACTIONS):
            if a not in allow:
                allowed[a] = False

    allowed[IDLE] = True
    return ActionMask(tuple(allowed))
