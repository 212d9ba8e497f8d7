"""Style statistics over simulated matches: radar metrics and cross-play
win-rate matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..game.types import MiniPitchConfig, Team
from .decompose import decompose, detect_events
from .replay import Replay

RADAR_METRICS = (
    "win_rate",
    "goals",
    "passes",
    "assists",
    "intercepts",
    "possession",
    "chain_length",
)


def match_style_stats(replay: Replay, side: Team) -> dict[str, float]:
    """Raw per-match style metrics for the policy that played `side`."""
    counts = detect_events(decompose(replay))
    me = side.value
    other = side.other.value
    final = replay.steps[-1].score if replay.steps else (0, 0)
    my_goals = final[0] if side is Team.LEFT else final[1]
    their_goals = final[1] if side is Team.LEFT else final[0]
    win = 1.0 if my_goals > their_goals else (0.5 if my_goals == their_goals else 0.0)
    poss_total = counts.possession_steps[me] + counts.possession_steps[other]
    possession = (
        counts.possession_steps[me] / poss_total if poss_total > 0 else 0.5
    )
    tree = decompose(replay)
    chains = [
        chain
        for sg in tree.subgames
        for chain in sg.chains
        if chain.team.value == me
    ]
    chain_length = (
        float(np.mean([len(c.nodes) for c in chains])) if chains else 0.0
    )
    return {
        "win_rate": win,
        "goals": float(my_goals),
        "passes": float(counts.passes[me]),
        "assists": float(counts.assists[me]),
        "intercepts": float(counts.intercepts[me]),
        "possession": possession,
        "chain_length": chain_length,
    }


def normalize_metrics(raw: dict[str, dict[str, float]]) -> dict[str, dict[str, float]]:
    """Min-max normalize each metric across the population to [0, 1]; a
    constant metric maps everyone to 0.5."""
    out: dict[str, dict[str, float]] = {pid: {} for pid in raw}
    for metric in RADAR_METRICS:
        values = [raw[pid][metric] for pid in raw]
        lo, hi = min(values), max(values)
        for pid in raw:
            if hi == lo:
                out[pid][metric] = 0.5
            else:
                out[pid][metric] = (raw[pid][metric] - lo) / (hi - lo)
    return out


def style_radar(
    policies: Sequence,
    config: MiniPitchConfig,
    episodes_per_pair: int = 10,
    seed: int = 0,
) -> dict[str, dict[str, float]]:
    """Simulate pairwise matches and return normalized metric vectors."""
    from ..orchestrator.evaluate import evaluate
    from ..orchestrator.tasks import stable_seed

    if not policies:
        return {}
    accum: dict[str, list[dict[str, float]]] = {p.id: [] for p in policies}
    pairs = []
    if len(policies) == 1:
        pairs = [(policies[0], policies[0])]
    else:
        for i, a in enumerate(policies):
            for b in policies[i + 1 :]:
                pairs.append((a, b))
    for a, b in pairs:
        result = evaluate(
            a,
            b,
            episodes_per_pair,
            config,
            seed=stable_seed(seed, "radar", a.id, b.id),
            record=True,
        )
        for replay, a_side in result.replays:
            accum[a.id].append(match_style_stats(replay, a_side))
            if b.id != a.id:
                accum[b.id].append(match_style_stats(replay, a_side.other))
    raw = {}
    for pid, stats in accum.items():
        raw[pid] = {
            m: float(np.mean([s[m] for s in stats])) if stats else 0.0
            for m in RADAR_METRICS
        }
    return normalize_metrics(raw)


def radar_csv(radar: dict[str, dict[str, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["policy"] + list(RADAR_METRICS))
    for pid in radar:
        writer.writerow([pid] + [f"{radar[pid][m]:.6f}" for m in RADAR_METRICS])
    return buf.getvalue()


@dataclass
class CrossPlay:
    ids: list[str]
    win: np.ndarray  # win[i][j]: row policy's win rate against column
    draw: np.ndarray  # symmetric

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["policy"] + self.ids + [f"draw_vs_{i}" for i in self.ids])
        for i, pid in enumerate(self.ids):
            row = [f"{v:.6f}" for v in self.win[i]] + [
                f"{v:.6f}" for v in self.draw[i]
            ]
            writer.writerow([pid] + row)
        return buf.getvalue()


def crossplay_matrix(
    policies: Sequence,
    config: MiniPitchConfig,
    episodes_per_pair: int = 10,
    seed: int = 0,
) -> CrossPlay:
    """Win/draw matrices with W + W^T + D = 1 entrywise; the diagonal
    averages the two self-play seats."""
    from ..orchestrator.evaluate import evaluate
    from ..orchestrator.tasks import stable_seed

    n = len(policies)
    win = np.zeros((n, n))
    draw = np.zeros((n, n))
    for i, a in enumerate(policies):
        for j, b in enumerate(policies):
            if j < i:
                continue
            result = evaluate(
                a,
                b,
                episodes_per_pair,
                config,
                seed=stable_seed(seed, "crossplay", a.id, b.id),
            )
            if i == j:
                win[i][i] = (result.win_rate + result.loss_rate) / 2.0
                draw[i][i] = result.draw_rate
            else:
                win[i][j] = result.win_rate
                win[j][i] = result.loss_rate
                draw[i][j] = draw[j][i] = result.draw_rate
    return CrossPlay([p.id for p in policies], win, draw)
