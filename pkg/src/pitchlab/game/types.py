"""Core domain types shared by the environments and everything downstream."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

N_ACTIONS = 19

# Default action vocabulary (index -> name).
IDLE = 0
LEFT = 1
TOP_LEFT = 2
TOP = 3
TOP_RIGHT = 4
RIGHT = 5
BOTTOM_RIGHT = 6
BOTTOM = 7
BOTTOM_LEFT = 8
LONG_PASS = 9
HIGH_PASS = 10
SHORT_PASS = 11
SHOT = 12
SPRINT = 13
RELEASE_DIRECTION = 14
RELEASE_SPRINT = 15
SLIDE = 16
DRIBBLE = 17
RELEASE_DRIBBLE = 18

ACTION_NAMES = (
    "idle",
    "left",
    "top_left",
    "top",
    "top_right",
    "right",
    "bottom_right",
    "bottom",
    "bottom_left",
    "long_pass",
    "high_pass",
    "short_pass",
    "shot",
    "sprint",
    "release_direction",
    "release_sprint",
    "slide",
    "dribble",
    "release_dribble",
)

# Movement deltas for the eight direction actions (dx, dy); y grows downward.
DIRECTION_DELTAS = {
    LEFT: (-1, 0),
    TOP_LEFT: (-1, -1),
    TOP: (0, -1),
    TOP_RIGHT: (1, -1),
    RIGHT: (1, 0),
    BOTTOM_RIGHT: (1, 1),
    BOTTOM: (0, 1),
    BOTTOM_LEFT: (-1, 1),
}

PASS_ACTIONS = (LONG_PASS, HIGH_PASS, SHORT_PASS)

# View-frame to canonical translation for the right team: a mirrored view
# flips the x axis, so the horizontal direction actions swap.
MIRRORED_ACTION = {
    LEFT: RIGHT,
    RIGHT: LEFT,
    TOP_LEFT: TOP_RIGHT,
    TOP_RIGHT: TOP_LEFT,
    BOTTOM_LEFT: BOTTOM_RIGHT,
    BOTTOM_RIGHT: BOTTOM_LEFT,
}


def mirror_action(action: int) -> int:
    return MIRRORED_ACTION.get(action, action)


class Team(str, Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def other(self) -> "Team":
        return Team.RIGHT if self is Team.LEFT else Team.LEFT


class GameMode(str, Enum):
    NORMAL = "Normal"
    KICK_OFF = "KickOff"
    FREE_KICK = "FreeKick"
    CORNER = "Corner"
    PENALTY = "Penalty"


GAME_MODES = tuple(GameMode)


class Role(str, Enum):
    GK = "GK"
    DEF = "DEF"
    MID = "MID"
    FWD = "FWD"


ROLES = tuple(Role)


@dataclass(frozen=True)
class MarkovGameSpec:
    """Shape of a two-team zero-sum Markov game."""

    n_agents_per_team: int
    action_count_per_agent: int = N_ACTIONS
    gamma: float = 0.99
    horizon: int = 100
    team_count: int = 2

    def __post_init__(self) -> None:
        if self.n_agents_per_team < 1:
            raise ValueError("need at least one agent per team")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1 step")
        if self.team_count != 2:
            raise ValueError("only two-team games are supported")


@dataclass(frozen=True)
class PlayerState:
    x: int
    y: int
    dx: int = 0
    dy: int = 0
    role: Role = Role.MID
    tired: bool = False
    sprinting: bool = False
    dribbling: bool = False

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class BallState:
    x: int
    y: int
    dx: int = 0
    dy: int = 0
    high: bool = False
    owned_team: Optional[Team] = None
    owned_player: Optional[int] = None

    def __post_init__(self) -> None:
        if (self.owned_team is None) != (self.owned_player is None):
            raise ValueError("owned_player must be set exactly when owned_team is")

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class RawObservation:
    """Full game state as presented to one side.

    The canonical view is the left team's: it attacks toward growing x.
    `mirror_view` produces the same state as seen by the right team, with
    positions reflected and team-tagged fields swapped.
    """

    step_index: int
    steps_left: int
    score: tuple[int, int]
    game_mode: GameMode
    ball: BallState
    players_left: tuple[PlayerState, ...]
    players_right: tuple[PlayerState, ...]
    width: int
    height: int

    def mirror_view(self) -> "RawObservation":
        w = self.width
        ball = self.ball
        mirrored_ball = replace(
            ball,
            x=w - 1 - ball.x,
            dx=-ball.dx,
            owned_team=None if ball.owned_team is None else ball.owned_team.other,
        )
        return replace(
            self,
            score=(self.score[1], self.score[0]),
            ball=mirrored_ball,
            players_left=tuple(_mirror_player(p, w) for p in self.players_right),
            players_right=tuple(_mirror_player(p, w) for p in self.players_left),
        )

    def players(self, team: Team) -> tuple[PlayerState, ...]:
        return self.players_left if team is Team.LEFT else self.players_right


def _mirror_player(p: PlayerState, width: int) -> PlayerState:
    return replace(p, x=width - 1 - p.x, dx=-p.dx)


@dataclass(frozen=True)
class Event:
    """One on-pitch event emitted by the environment during a step."""

    kind: str
    step: int
    team: Optional[Team] = None
    player: Optional[int] = None
    prev_team: Optional[Team] = None
    prev_player: Optional[int] = None
    target: Optional[int] = None
    success: Optional[bool] = None


# Event kinds.
MOVE = "Move"
PASS_ATTEMPT = "PassAttempt"
PASS_COMPLETE = "PassComplete"
OWNERSHIP_CHANGE = "OwnershipChange"
SHOT_EVENT = "Shot"
GOAL = "Goal"
OUT_OF_PLAY = "OutOfPlay"


@dataclass(frozen=True)
class MiniPitchConfig:
    """Geometry and rule switches for the gridworld football game."""

    width: int = 12
    height: int = 8
    n_per_team: int = 3
    max_steps: int = 200
    academy_mode: bool = False
    halftime_swap: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.width < 6 or self.height < 4:
            raise ValueError("pitch must be at least 6x4 cells")
        if self.n_per_team < 1:
            raise ValueError("need at least one player per team")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.halftime_swap and self.max_steps % 2 != 0:
            raise ValueError("max_steps must be even when halftime_swap is on")

    # Derived geometry. Goal mouths sit on the two end columns, centred rows.
    @property
    def goal_rows(self) -> tuple[int, int]:
        low = self.height // 2 - 1
        return (low, low + 1)

    @property
    def penalty_depth(self) -> int:
        return max(2, self.width // 4)

    @property
    def shot_range(self) -> float:
        return float(self.penalty_depth + 2)

    @property
    def far_ball_threshold(self) -> float:
        return self.width / 3.0

    @property
    def has_goalkeepers(self) -> bool:
        return self.n_per_team >= 2

    def fingerprint(self) -> str:
        key = (
            f"minipitch/1:w={self.width},h={self.height},n={self.n_per_team},"
            f"T={self.max_steps},academy={int(self.academy_mode)},"
            f"half={int(self.halftime_swap)}"
        )
        return key

    def config_hash(self) -> str:
        return hashlib.blake2b(
            self.fingerprint().encode("ascii"), digest_size=8
        ).hexdigest()


def roles_for_team(n: int) -> tuple[Role, ...]:
    """Deterministic role assignment: index 0 keeps goal when n >= 2."""
    if n == 1:
        return (Role.FWD,)
    roles = [Role.GK]
    outfield = n - 1
    for i in range(outfield):
        if i < outfield // 3:
            roles.append(Role.DEF)
        elif i < 2 * outfield // 3 or i < outfield - 1:
            roles.append(Role.MID)
        else:
            roles.append(Role.FWD)
    return tuple(roles)
