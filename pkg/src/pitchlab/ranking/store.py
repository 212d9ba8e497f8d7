"""Persistence for the ranking service: an append-only JSONL event log that
the live state is a pure fold over, plus artifact and replay files.

Event timestamps are a monotonic counter, not wall time, so replaying the
log always rebuilds the exact live state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..game.types import MiniPitchConfig
from ..metagame import ELO_INITIAL, elo_update

DEFAULT_SCENARIOS = {
    "minipitch-1v1": {"width": 12, "height": 8, "n_per_team": 1, "max_steps": 100},
    "minipitch-3v3": {"width": 12, "height": 8, "n_per_team": 3, "max_steps": 200},
}


def scenario_config(fields: dict) -> MiniPitchConfig:
    return MiniPitchConfig(
        width=int(fields["width"]),
        height=int(fields["height"]),
        n_per_team=int(fields["n_per_team"]),
        max_steps=int(fields["max_steps"]),
    )


@dataclass
class SubmissionRecord:
    id: str
    user: str
    scenario: str
    ts: int
    artifact_path: str
    status: str = "pending"


@dataclass
class MatchRecordRow:
    id: str
    scenario: str
    a: str
    b: str
    outcome_a: float
    wins: float
    draws: float
    losses: float
    goal_diff: float
    replay_path: Optional[str]
    context: str
    ts: int


@dataclass
class RoundRow:
    scenario: str
    index: int
    weight: float
    pairings: list[tuple[str, str, str]]
    bye: Optional[str]
    scores: dict[str, float]
    ts: int


@dataclass
class RankingState:
    """Everything the service serves, rebuilt by folding the event log."""

    submissions: dict[str, SubmissionRecord] = field(default_factory=dict)
    matches: dict[str, MatchRecordRow] = field(default_factory=dict)
    rounds: dict[str, list[RoundRow]] = field(default_factory=dict)
    scores: dict[str, dict[str, float]] = field(default_factory=dict)
    elo: dict[str, dict[str, float]] = field(default_factory=dict)
    matches_played: dict[str, int] = field(default_factory=dict)
    ts: int = 0

    def apply(self, event: dict) -> None:
        kind = event["kind"]
        self.ts = max(self.ts, int(event["ts"]))
        if kind == "submission":
            rec = SubmissionRecord(
                id=event["id"],
                user=event["user"],
                scenario=event["scenario"],
                ts=int(event["ts"]),
                artifact_path=event["artifact"],
                status=event.get("status", "pending"),
            )
            self.submissions[rec.id] = rec
            self.scores.setdefault(rec.scenario, {}).setdefault(rec.id, 0.0)
        elif kind == "match":
            row = MatchRecordRow(
                id=event["id"],
                scenario=event["scenario"],
                a=event["a"],
                b=event["b"],
                outcome_a=float(event["outcome_a"]),
                wins=float(event["wins"]),
                draws=float(event["draws"]),
                losses=float(event["losses"]),
                goal_diff=float(event["gd"]),
                replay_path=event.get("replay"),
                context=event.get("context", ""),
                ts=int(event["ts"]),
            )
            self.matches[row.id] = row
            elo = self.elo.setdefault(row.scenario, {})
            ra = elo.get(row.a, ELO_INITIAL)
            rb = elo.get(row.b, ELO_INITIAL)
            elo[row.a], elo[row.b] = elo_update(ra, rb, row.outcome_a)
            self.matches_played[row.a] = self.matches_played.get(row.a, 0) + 1
            self.matches_played[row.b] = self.matches_played.get(row.b, 0) + 1
            for sub in (row.a, row.b):
                if row.scenario in self.scores:
                    self.scores[row.scenario].setdefault(sub, 0.0)
            if "placement" not in row.context:
                sub = self.submissions.get(row.a)
                if sub is not None:
                    sub.status = "evaluated"
        elif kind == "status":
            sub = self.submissions.get(event["id"])
            if sub is not None:
                sub.status = event["status"]
        elif kind == "round":
            row = RoundRow(
                scenario=event["scenario"],
                index=int(event["index"]),
                weight=float(event["weight"]),
                pairings=[tuple(p) for p in event["pairings"]],
                bye=event.get("bye"),
                scores=dict(event["scores"]),
                ts=int(event["ts"]),
            )
            self.rounds.setdefault(row.scenario, []).append(row)
            table = self.scores.setdefault(row.scenario, {})
            for sub, round_score in row.scores.items():
                table[sub] = table.get(sub, 0.0) + row.weight * round_score
        else:
            raise ValueError(f"unknown event kind {kind!r}")

    def ranking(self, scenario: str) -> list[dict]:
        table = self.scores.get(scenario, {})
        elo = self.elo.get(scenario, {})
        rows = []
        for sub_id in table:
            rows.append(
                {
                    "submission": sub_id,
                    "user": self.submissions[sub_id].user
                    if sub_id in self.submissions
                    else "",
                    "score": table[sub_id],
                    "elo": elo.get(sub_id, ELO_INITIAL),
                    "matches": self.matches_played.get(sub_id, 0),
                }
            )
        rows.sort(key=lambda r: (-r["score"], -r["elo"], r["submission"]))
        return rows

    def serialize(self) -> bytes:
        """Canonical byte serialization: rebuilt state must equal live state."""

        def sub_json(s: SubmissionRecord) -> dict:
            return {
                "id": s.id,
                "user": s.user,
                "scenario": s.scenario,
                "ts": s.ts,
                "artifact": s.artifact_path,
                "status": s.status,
            }

        def match_json(m: MatchRecordRow) -> dict:
            return {
                "id": m.id,
                "scenario": m.scenario,
                "a": m.a,
                "b": m.b,
                "outcome_a": m.outcome_a,
                "wins": m.wins,
                "draws": m.draws,
                "losses": m.losses,
                "gd": m.goal_diff,
                "replay": m.replay_path,
                "context": m.context,
                "ts": m.ts,
            }

        doc = {
            "ts": self.ts,
            "submissions": {k: sub_json(v) for k, v in sorted(self.submissions.items())},
            "matches": {k: match_json(v) for k, v in sorted(self.matches.items())},
            "rounds": {
                scen: [
                    {
                        "index": r.index,
                        "weight": r.weight,
                        "pairings": [list(p) for p in r.pairings],
                        "bye": r.bye,
                        "scores": dict(sorted(r.scores.items())),
                        "ts": r.ts,
                    }
                    for r in rounds
                ]
                for scen, rounds in sorted(self.rounds.items())
            },
            "scores": {
                scen: dict(sorted(t.items())) for scen, t in sorted(self.scores.items())
            },
            "elo": {
                scen: dict(sorted(t.items())) for scen, t in sorted(self.elo.items())
            },
            "matches_played": dict(sorted(self.matches_played.items())),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


class LogStore:
    """Owns the data directory: event log, artifacts, replays, scenarios."""

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "artifacts").mkdir(exist_ok=True)
        (self.root / "replays").mkdir(exist_ok=True)
        self.log_path = self.root / "log.jsonl"
        self.scenarios_path = self.root / "scenarios.json"
        if not self.scenarios_path.exists():
            self.scenarios_path.write_text(
                json.dumps(DEFAULT_SCENARIOS, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        self.scenarios = json.loads(self.scenarios_path.read_text(encoding="utf-8"))

    def scenario_env(self, scenario: str) -> MiniPitchConfig:
        if scenario not in self.scenarios:
            raise KeyError(f"unknown scenario {scenario!r}")
        return scenario_config(self.scenarios[scenario])

    def append(self, event: dict) -> None:
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def read_events(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        events = []
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events

    def rebuild(self) -> RankingState:
        state = RankingState()
        for event in self.read_events():
            state.apply(event)
        return state

    def write_snapshot(self, state: RankingState) -> None:
        (self.root / "snapshot.json").write_bytes(state.serialize())

    def artifact_path(self, sub_id: str) -> Path:
        return self.root / "artifacts" / f"{sub_id}.policy"

    def replay_path(self, match_id: str) -> Path:
        return self.root / "replays" / f"{match_id}.rpl"
