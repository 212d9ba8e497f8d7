"""Line-delimited replay files: one JSON header line, one JSON line per step.

The byte layout is canonical (sorted keys, compact separators), so writing
a parsed replay reproduces the original file exactly. Record `k` holds the
state after env step k+1 together with the resolved per-player actions and
per-team rewards of that step; a T-step episode yields records 0..T-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..game.types import (
    BallState,
    Event,
    MiniPitchConfig,
    PlayerState,
    RawObservation,
    Role,
    Team,
)

REPLAY_FORMAT = "replay/1"


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class ReplayStep:
    t: int
    score: tuple[int, int]
    mode: str
    ball: BallState
    left: tuple[PlayerState, ...]
    right: tuple[PlayerState, ...]
    actions: tuple[tuple[int, ...], tuple[int, ...]]
    rewards: tuple[float, float]

    def owner(self) -> Optional[tuple[Team, int]]:
        if self.ball.owned_team is None:
            return None
        return (self.ball.owned_team, self.ball.owned_player)


@dataclass
class Replay:
    header: dict
    steps: list[ReplayStep] = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def fingerprint(self) -> str:
        return str(self.header.get("env", ""))


def _player_to_json(p: PlayerState) -> list:
    return [p.x, p.y, p.dx, p.dy, p.role.value, 1 if p.tired else 0]


def _player_from_json(raw: Sequence) -> PlayerState:
    if len(raw) != 6:
        raise ReplayError("player record must have 6 fields")
    return PlayerState(
        x=int(raw[0]),
        y=int(raw[1]),
        dx=int(raw[2]),
        dy=int(raw[3]),
        role=Role(raw[4]),
        tired=bool(raw[5]),
    )


def step_to_json(s: ReplayStep) -> dict:
    b = s.ball
    owner = None if b.owned_team is None else [b.owned_team.value, b.owned_player]
    return {
        "t": s.t,
        "score": list(s.score),
        "mode": s.mode,
        "ball": {
            "x": b.x,
            "y": b.y,
            "dx": b.dx,
            "dy": b.dy,
            "hi": 1 if b.high else 0,
            "owner": owner,
        },
        "left": [_player_to_json(p) for p in s.left],
        "right": [_player_to_json(p) for p in s.right],
        "act": [list(s.actions[0]), list(s.actions[1])],
        "rew": [s.rewards[0], s.rewards[1]],
    }


def step_from_json(raw: dict) -> ReplayStep:
    ball_raw = raw["ball"]
    owner = ball_raw.get("owner")
    if owner is not None and (len(owner) != 2 or owner[1] is None):
        raise ReplayError("ball owner must be [team, player] or null")
    ball = BallState(
        x=int(ball_raw["x"]),
        y=int(ball_raw["y"]),
        dx=int(ball_raw["dx"]),
        dy=int(ball_raw["dy"]),
        high=bool(ball_raw.get("hi", 0)),
        owned_team=None if owner is None else Team(owner[0]),
        owned_player=None if owner is None else int(owner[1]),
    )
    return ReplayStep(
        t=int(raw["t"]),
        score=(int(raw["score"][0]), int(raw["score"][1])),
        mode=str(raw["mode"]),
        ball=ball,
        left=tuple(_player_from_json(p) for p in raw["left"]),
        right=tuple(_player_from_json(p) for p in raw["right"]),
        actions=(
            tuple(int(a) for a in raw["act"][0]),
            tuple(int(a) for a in raw["act"][1]),
        ),
        rewards=(float(raw["rew"][0]), float(raw["rew"][1])),
    )


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_replay(replay: Replay) -> str:
    header = dict(replay.header)
    header["format"] = REPLAY_FORMAT
    lines = [_dump(header)]
    for s in replay.steps:
        lines.append(_dump(step_to_json(s)))
    return "\n".join(lines) + "\n"


def read_replay(
    text: str, expected_fingerprint: Optional[str] = None
) -> Replay:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ReplayError("line 1: missing replay header")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ReplayError(f"line 1: malformed header: {exc}") from exc
    if header.get("format") != REPLAY_FORMAT:
        raise ReplayError(f"line 1: unsupported format {header.get('format')!r}")
    if (
        expected_fingerprint is not None
        and header.get("env") != expected_fingerprint
    ):
        raise ReplayError(
            f"header fingerprint {header.get('env')!r} does not match "
            f"expected {expected_fingerprint!r}"
        )
    steps: list[ReplayStep] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise ReplayError(f"line {lineno}: blank record line")
        try:
            raw = json.loads(line)
            step = step_from_json(raw)
        except ReplayError as exc:
            raise ReplayError(f"line {lineno}: {exc}") from exc
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise ReplayError(f"line {lineno}: malformed record: {exc}") from exc
        steps.append(step)
    for i, s in enumerate(steps):
        if s.t != i:
            raise ReplayError(
                f"line {i + 2}: step index {s.t} breaks the contiguous order"
            )
    return Replay(header=header, steps=steps)


def load_replay(path, expected_fingerprint: Optional[str] = None) -> Replay:
    with open(path, "r", encoding="utf-8") as fh:
        return read_replay(fh.read(), expected_fingerprint)


def save_replay(replay: Replay, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_replay(replay))


def make_header(
    config: MiniPitchConfig,
    seed: int,
    policies: Sequence[str],
) -> dict:
    return {
        "format": REPLAY_FORMAT,
        "env": config.fingerprint(),
        "config_hash": config.config_hash(),
        "seed": seed,
        "policies": list(policies),
        "width": config.width,
        "height": config.height,
        "n_per_team": config.n_per_team,
        "max_steps": config.max_steps,
    }


class ReplayRecorder:
    """Collects post-step observations, actions and rewards during a match."""

    def __init__(self, config: MiniPitchConfig, seed: int, policies: Sequence[str]):
        self.replay = Replay(header=make_header(config, seed, policies))

    def record(
        self,
        obs: RawObservation,
        actions: tuple[Sequence[int], Sequence[int]],
        rewards: tuple[float, float],
        events: Sequence[Event] = (),
    ) -> None:
        del events  # events are derivable; the format stores raw state only
        self.replay.steps.append(
            ReplayStep(
                t=len(self.replay.steps),
                score=obs.score,
                mode=obs.game_mode.value,
                ball=obs.ball,
                left=obs.players_left,
                right=obs.players_right,
                actions=(
                    tuple(int(a) for a in actions[0]),
                    tuple(int(a) for a in actions[1]),
                ),
                rewards=(float(rewards[0]), float(rewards[1])),
            )
        )
