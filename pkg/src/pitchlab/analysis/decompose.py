"""Replay decomposition into subgames, chains and nodes, plus the event
counters read off the tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..game.types import SHOT, Team
from .chains import Assist, Chain, ChainTracker, Node, Subgame
from .replay import Replay


@dataclass
class MatchDecomposition:
    replay: Replay
    subgames: list[Subgame]
    assists: list[Assist]
    upto: Optional[int] = None  # prefix bound the tree was built with

    def flattened_nodes(self) -> list[tuple[Team, Node]]:
        out = []
        for sg in self.subgames:
            for chain in sg.chains:
                for node in chain.nodes:
                    out.append((chain.team, node))
        return out


@dataclass
class EventCounts:
    goals: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})
    shots: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})
    passes: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})
    intercepts: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})
    assists: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})
    possession_steps: dict[str, int] = field(
        default_factory=lambda: {"L": 0, "R": 0}
    )

    def as_dict(self) -> dict:
        return {
            "goals": dict(self.goals),
            "shots": dict(self.shots),
            "passes": dict(self.passes),
            "intercepts": dict(self.intercepts),
            "assists": dict(self.assists),
            "possession_steps": dict(self.possession_steps),
        }


def decompose(replay: Replay, upto: Optional[int] = None) -> MatchDecomposition:
    """Build the subgame/chain/node tree from a replay (optionally a prefix).

    Raises on an inconsistent ownership stream (a team without a player or
    vice versa) via the underlying ball-state validation.
    """
    tracker = ChainTracker()
    steps = replay.steps if upto is None else replay.steps[: upto + 1]
    for rec in steps:
        tracker.step(rec.t, rec.score, rec.ball.owned_team, rec.ball.owned_player)
    tracker.finish()
    return MatchDecomposition(replay, tracker.subgames, tracker.assists, upto)


def detect_events(decomposition: MatchDecomposition, upto: Optional[int] = None) -> EventCounts:
    """Counters read from the decomposition tree plus the replay's actions.

    Passes are node transitions within chains; intercepts are chain
    transitions within subgames, credited to the gaining team; assists come
    from the second-to-last node of a scoring chain; shots count records
    whose pre-step ball owner played the shot action.
    """
    out = EventCounts()
    for sg in decomposition.subgames:
        if sg.scoring_team is not None:
            out.goals[sg.scoring_team.value] += 1
        for ci, chain in enumerate(sg.chains):
            key = chain.team.value
            out.passes[key] += max(0, len(chain.nodes) - 1)
            if ci > 0:
                out.intercepts[key] += 1
            for node in chain.nodes:
                out.possession_steps[key] += node.end - node.start + 1
    for a in decomposition.assists:
        out.assists[a.team.value] += 1
    if upto is None:
        upto = decomposition.upto
    steps = decomposition.replay.steps
    if upto is not None:
        steps = steps[: upto + 1]
    for k in range(1, len(steps)):
        prev_owner = steps[k - 1].owner()
        if prev_owner is None:
            continue
        team, idx = prev_owner
        side = 0 if team is Team.LEFT else 1
        acts = steps[k].actions[side]
        if idx < len(acts) and acts[idx] == SHOT:
            out.shots[team.value] += 1
    return out


def analyze_replay(replay: Replay, upto: Optional[int] = None) -> EventCounts:
    return detect_events(decompose(replay, upto), upto)
