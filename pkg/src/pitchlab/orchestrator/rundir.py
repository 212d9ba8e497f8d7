"""Run-directory layout: everything needed to inspect or re-run a pipeline."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .. import learner
from ..metagame import elo_history_csv
from .pipelines import PipelineResult


def nash_history_csv(history) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["generation", "policy", "probability"])
    for gen, mixture in history:
        for pid, prob in mixture.items():
            writer.writerow([gen, pid, f"{prob:.6f}"])
    return buf.getvalue()


def metrics_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["wall_clock_s", "samples", "win_rate"])
    for wall, samples, rate in rows:
        writer.writerow([f"{wall:.3f}", samples, f"{rate:.4f}"])
    return buf.getvalue()


def write_run_dir(out_dir, manifest: dict, result: PipelineResult) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    policies_dir = out / "policies"
    policies_dir.mkdir(exist_ok=True)
    replays_dir = out / "replays"
    replays_dir.mkdir(exist_ok=True)

    members = []
    for handle in result.population.members:
        artifact = policies_dir / f"{handle.id}.policy"
        artifact.write_text(learner.to_text(handle.policy), encoding="utf-8")
        members.append(
            {
                "id": handle.id,
                "role": handle.role,
                "generation": handle.generation,
                "version": handle.policy.version,
                "kind": handle.policy.kind,
                "artifact": str(artifact.relative_to(out)),
                "opponent_log": handle.opponent_log,
            }
        )
    (out / "population.json").write_text(
        json.dumps(members, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out / "payoff_winrate.csv").write_text(
        result.population.payoff.to_csv("winrate"), encoding="utf-8"
    )
    (out / "payoff_gd.csv").write_text(
        result.population.payoff.to_csv("goal_difference"), encoding="utf-8"
    )
    (out / "elo.csv").write_text(
        elo_history_csv(result.elo_history), encoding="utf-8"
    )
    (out / "nash.csv").write_text(
        nash_history_csv(result.nash_history), encoding="utf-8"
    )
    (out / "metrics.csv").write_text(metrics_csv(result.metrics), encoding="utf-8")
    manifest = dict(manifest)
    manifest["artifacts"] = {
        "population": "population.json",
        "payoff_winrate": "payoff_winrate.csv",
        "payoff_goal_difference": "payoff_gd.csv",
        "elo": "elo.csv",
        "nash": "nash.csv",
        "metrics": "metrics.csv",
        "policies": "policies/",
        "replays": "replays/",
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out
