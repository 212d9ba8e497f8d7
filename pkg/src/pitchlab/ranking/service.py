"""The leaderboard service: submissions, Swiss rounds, rankings, replays.

Match simulation is serialized per scenario; every accepted submission and
simulated match is appended to the event log before the live state mutates,
so a restart that folds the log reproduces the live state byte for byte.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

from .. import learner
from ..analysis.decompose import analyze_replay
from ..analysis.replay import load_replay, save_replay
from ..orchestrator.evaluate import evaluate
from ..orchestrator.tasks import stable_seed
from .store import LogStore, RankingState


class ValidationError(ValueError):
    pass


@dataclass
class RoundResult:
    scenario: str
    index: int
    weight: float
    pairings: list[tuple[str, str, str]]  # (a, b, match id)
    bye: Optional[str]
    scores: dict[str, float]


class RankingService:
    def __init__(
        self,
        data_dir,
        placement_episodes: int = 2,
        round_episodes: int = 4,
        seed: int = 0,
    ):
        self.store = LogStore(data_dir)
        self.state = self.store.rebuild()
        self.placement_episodes = placement_episodes
        self.round_episodes = round_episodes
        self.seed = seed
        self._lock = threading.RLock()
        self._sim_locks: dict[str, threading.Lock] = {}
        self._pending: list[str] = []

    # -- internals -------------------------------------------------------------

    def _append(self, event: dict) -> None:
        self.store.append(event)
        self.state.apply(event)

    def _next_ts(self) -> int:
        return self.state.ts + 1

    def _sim_lock(self, scenario: str) -> threading.Lock:
        with self._lock:
            return self._sim_locks.setdefault(scenario, threading.Lock())

    def _load_policy(self, sub_id: str) -> learner.Policy:
        path = self.store.artifact_path(sub_id)
        return learner.from_text(path.read_text(encoding="utf-8"))

    # -- submissions -----------------------------------------------------------

    def submit(self, artifact_text: str, user: str, scenario: str) -> str:
        """Validate and store; placement evaluation is deferred."""
        with self._lock:
            try:
                policy = learner.from_text(artifact_text)
            except ValueError as exc:
                raise ValidationError(f"malformed artifact: {exc}") from exc
            try:
                env_config = self.store.scenario_env(scenario)
            except KeyError as exc:
                raise ValidationError(str(exc)) from exc
            expected = env_config.fingerprint()
            if policy.env_fingerprint != expected:
                raise ValidationError(
                    f"artifact fingerprint {policy.env_fingerprint!r} does not "
                    f"match scenario {scenario!r} ({expected!r})"
                )
            sub_id = f"sub-{len(self.state.submissions) + 1:04d}"
            path = self.store.artifact_path(sub_id)
            path.write_text(artifact_text, encoding="utf-8")
            self._append(
                {
                    "kind": "submission",
                    "id": sub_id,
                    "user": user,
                    "scenario": scenario,
                    "artifact": str(path.relative_to(self.store.root)),
                    "ts": self._next_ts(),
                }
            )
            self._pending.append(sub_id)
            return sub_id

    def process_pending(self) -> int:
        """Run queued placement evaluations (new submission vs current top 3).

        Placement matches adjust Elo only; accumulated scores come solely
        from Swiss rounds.
        """
        done = 0
        while True:
            with self._lock:
                if not self._pending:
                    return done
                sub_id = self._pending.pop(0)
                scenario = self.state.submissions[sub_id].scenario
                opponents = [
                    row["submission"]
                    for row in self.state.ranking(scenario)
                    if row["submission"] != sub_id
                ][:3]
            for opp in opponents:
                self._simulate_match(
                    scenario, sub_id, opp, self.placement_episodes, "placement"
                )
            with self._lock:
                self._append(
                    {
                        "kind": "status",
                        "id": sub_id,
                        "status": "placed",
                        "ts": self._next_ts(),
                    }
                )
            done += 1

    # -- matches ----------------------------------------------------------------

    def _simulate_match(
        self, scenario: str, a: str, b: str, episodes: int, context: str
    ) -> tuple[str, float]:
        env_config = self.store.scenario_env(scenario)
        with self._sim_lock(scenario):
            pa = self._load_policy(a)
            pb = self._load_policy(b)
            with self._lock:
                match_id = f"m-{len(self.state.matches) + 1:04d}"
            result = evaluate(
                pa,
                pb,
                episodes,
                env_config,
                seed=stable_seed(self.seed, scenario, match_id, a, b),
                record=True,
            )
            replay_rel = None
            if result.replays:
                replay, _side = result.replays[0]
                replay.header["match"] = match_id
                replay.header["policies"] = [a, b]
                path = self.store.replay_path(match_id)
                save_replay(replay, path)
                replay_rel = str(path.relative_to(self.store.root))
            outcome = (
                1.0
                if result.win_rate > result.loss_rate
                else (0.0 if result.loss_rate > result.win_rate else 0.5)
            )
            with self._lock:
                self._append(
                    {
                        "kind": "match",
                        "id": match_id,
                        "scenario": scenario,
                        "a": a,
                        "b": b,
                        "outcome_a": outcome,
                        "wins": result.wins,
                        "draws": result.draws,
                        "losses": result.losses,
                        "gd": result.mean_goal_diff,
                        "replay": replay_rel,
                        "context": context,
                        "ts": self._next_ts(),
                    }
                )
            return match_id, outcome

    # -- swiss rounds ------------------------------------------------------------

    def _played_pairs(self, scenario: str) -> set[frozenset]:
        pairs = set()
        for r in self.state.rounds.get(scenario, []):
            for a, b, _mid in r.pairings:
                pairs.add(frozenset((a, b)))
        return pairs

    def run_swiss_round(
        self,
        scenario: str,
        episodes_per_pairing: Optional[int] = None,
        weight: float = 1.0,
    ) -> RoundResult:
        """Pair adjacent standings, avoid rematches while possible, give the
        odd player out a half-point bye, accumulate weighted scores."""
        if weight <= 0:
            raise ValidationError("round weight must be positive")
        episodes = episodes_per_pairing or self.round_episodes
        with self._lock:
            subs = [
                s.id
                for s in self.state.submissions.values()
                if s.scenario == scenario
            ]
            if len(subs) < 2:
                raise ValidationError(
                    f"need at least 2 submissions in {scenario!r}, have {len(subs)}"
                )
            ranking_rows = {r["submission"]: r for r in self.state.ranking(scenario)}
            ordered = sorted(
                subs,
                key=lambda s: (
                    -ranking_rows.get(s, {"score": 0.0})["score"],
                    -ranking_rows.get(s, {"elo": 1000.0})["elo"],
                    s,
                ),
            )
            played = self._played_pairs(scenario)
            index = len(self.state.rounds.get(scenario, [])) + 1

        bye: Optional[str] = None
        if len(ordered) % 2 == 1:
            bye = ordered[-1]
            ordered = ordered[:-1]

        pairs: list[tuple[str, str]] = []
        pool = list(ordered)
        while pool:
            top = pool.pop(0)
            pick = None
            for cand in pool:
                if frozenset((top, cand)) not in played:
                    pick = cand
                    break
            if pick is None:  # all rematches: pair the nearest anyway
                pick = pool[0]
            pool.remove(pick)
            pairs.append((top, pick))

        pairings: list[tuple[str, str, str]] = []
        round_scores: dict[str, float] = {}
        for a, b in pairs:
            match_id, outcome = self._simulate_match(
                scenario, a, b, episodes, f"round:{index}"
            )
            pairings.append((a, b, match_id))
            round_scores[a] = round_scores.get(a, 0.0) + outcome
            round_scores[b] = round_scores.get(b, 0.0) + (1.0 - outcome)
        if bye is not None:
            round_scores[bye] = round_scores.get(bye, 0.0) + 0.5

        with self._lock:
            self._append(
                {
                    "kind": "round",
                    "scenario": scenario,
                    "index": index,
                    "weight": weight,
                    "pairings": [list(p) for p in pairings],
                    "bye": bye,
                    "scores": round_scores,
                    "ts": self._next_ts(),
                }
            )
        return RoundResult(scenario, index, weight, pairings, bye, round_scores)

    # -- queries ---------------------------------------------------------------

    def get_ranking(self, scenario: str) -> list[dict]:
        with self._lock:
            return self.state.ranking(scenario)

    def get_replay_bytes(self, match_id: str) -> bytes:
        with self._lock:
            match = self.state.matches.get(match_id)
        if match is None or match.replay_path is None:
            raise KeyError(f"no replay for match {match_id!r}")
        return (self.store.root / match.replay_path).read_bytes()

    def get_match_stats(self, match_id: str) -> dict:
        with self._lock:
            match = self.state.matches.get(match_id)
        if match is None or match.replay_path is None:
            raise KeyError(f"unknown match {match_id!r}")
        replay = load_replay(self.store.root / match.replay_path)
        counts = analyze_replay(replay)
        return {
            "match": match_id,
            "policies": [match.a, match.b],
            "counts": counts.as_dict(),
        }

    def snapshot(self) -> None:
        with self._lock:
            self.store.write_snapshot(self.state)

    def rebuild_state(self) -> RankingState:
        """Fold the log from scratch (restart semantics)."""
        return self.store.rebuild()
