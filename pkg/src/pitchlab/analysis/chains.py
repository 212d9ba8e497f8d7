"""Incremental possession tracking: subgames, chains and nodes.

A match splits into subgames at score changes; within a subgame, runs of
single-team possession form chains; within a chain, runs of single-player
possession form nodes. While the ball is loose between two owners of the
same team (and no goal interrupts), the steps are attributed to the
previous owner, so a pass in flight extends the passer's node. A loose
spell that ends with the other team belongs to no node, and the new chain
starts at the step the new team gains the ball.

Derived events: a node transition inside a chain is a pass; a chain
transition inside a subgame is an intercept credited to the gaining team;
a goal whose subgame ends with a chain of the scoring team holding two or
more nodes yields an assist for the second-to-last node's player.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..game.types import Team


@dataclass
class Node:
    player: int
    start: int
    end: int


@dataclass
class Chain:
    team: Team
    nodes: list[Node] = field(default_factory=list)

    @property
    def start(self) -> int:
        return self.nodes[0].start

    @property
    def end(self) -> int:
        return self.nodes[-1].end


@dataclass
class Subgame:
    start: int
    end: int
    chains: list[Chain] = field(default_factory=list)
    scoring_team: Optional[Team] = None


@dataclass(frozen=True)
class Assist:
    step: int
    team: Team
    player: int
    scorer: int


class ChainTracker:
    """Feed one record at a time: (score, owner team, owner player)."""

    def __init__(self) -> None:
        self.subgames: list[Subgame] = []
        self._chains: list[Chain] = []
        self._chain: Optional[Chain] = None
        self._gap_start: Optional[int] = None
        self._last_step: Optional[int] = None
        self._prev_score: tuple[int, int] = (0, 0)
        self._subgame_start = 0
        self.assists: list[Assist] = []

    # -- feeding --------------------------------------------------------------

    def step(
        self,
        step: int,
        score: tuple[int, int],
        owner_team: Optional[Team],
        owner_player: Optional[int],
    ) -> Optional[Assist]:
        if (owner_team is None) != (owner_player is None):
            raise ValueError(f"record {step}: inconsistent ball ownership")
        assist: Optional[Assist] = None
        if score != self._prev_score:
            assist = self._close_subgame(step, score)
            self._prev_score = score

        if owner_team is None:
            if self._gap_start is None:
                self._gap_start = step
        else:
            self._acquire(step, owner_team, owner_player)
        self._last_step = step
        return assist

    def finish(self) -> None:
        """Close the final subgame once all records were fed."""
        if self._last_step is None:
            return
        self._end_open_chain()
        if self._chains or self._subgame_start <= self._last_step:
            self.subgames.append(
                Subgame(self._subgame_start, self._last_step, self._chains)
            )
        self._chains = []
        self._chain = None

    # -- internals ---------------------------------------------------------------

    def _acquire(self, step: int, team: Team, player: int) -> None:
        self._gap_start = None
        if self._chain is not None and self._chain.team is team:
            last = self._chain.nodes[-1]
            if last.player == player:
                last.end = step
                return
            # Pass: the previous node covers the flight, then a new node opens.
            last.end = step - 1
            self._chain.nodes.append(Node(player, step, step))
            return
        # New chain: either the first of the subgame or an intercept.
        self._end_open_chain()
        self._chain = Chain(team, [Node(player, step, step)])
        self._chains.append(self._chain)

    def _end_open_chain(self) -> None:
        self._chain = None
        self._gap_start = None

    def _close_subgame(self, step: int, score: tuple[int, int]) -> Optional[Assist]:
        scoring = self._scoring_team(self._prev_score, score)
        assist: Optional[Assist] = None
        if (
            scoring is not None
            and self._chain is not None
            and self._chain.team is scoring
            and len(self._chain.nodes) >= 2
        ):
            assist = Assist(
                step=step,
                team=scoring,
                player=self._chain.nodes[-2].player,
                scorer=self._chain.nodes[-1].player,
            )
            self.assists.append(assist)
        self._end_open_chain()
        self.subgames.append(
            Subgame(self._subgame_start, step, self._chains, scoring_team=scoring)
        )
        self._chains = []
        self._subgame_start = step + 1
        return assist

    @staticmethod
    def _scoring_team(
        prev: tuple[int, int], cur: tuple[int, int]
    ) -> Optional[Team]:
        if cur[0] > prev[0] and cur[1] == prev[1]:
            return Team.LEFT
        if cur[1] > prev[1] and cur[0] == prev[0]:
            return Team.RIGHT
        return None
