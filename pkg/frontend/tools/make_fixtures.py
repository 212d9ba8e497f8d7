"""Export golden fixtures for the debugger: a long replay plus the primary
analytics' cumulative event counts at pinned frames.

Run from the repository root with the Python package installed:

    python frontend/tools/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from pitchlab.analysis import analyze_replay, decompose, write_replay
from pitchlab.game import MiniPitchConfig
from pitchlab.learner import built_in_ai, scripted_policy
from pitchlab.orchestrator.rollout import play_match
from pitchlab.game.minipitch import MiniPitch

OUT = Path(__file__).resolve().parent.parent / "fixtures"

CHECK_FRAMES = (0, 1, 57, 500, 1500, 2999)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    config = MiniPitchConfig(
        width=12, height=8, n_per_team=3, max_steps=3000, halftime_swap=True, seed=0
    )
    env = MiniPitch(config)
    # Random vs chaser produces a rich mix of passes, intercepts, assists
    # and goals for the stats-parity checks.
    result = play_match(
        env,
        scripted_policy("random").start_episode(),
        built_in_ai(1).start_episode(),
        seed=20,
        record=True,
        policies=("random", "built-in-d1"),
    )
    replay = result.replay
    assert replay is not None and len(replay.steps) == 3000
    (OUT / "golden_3000.rpl").write_text(write_replay(replay), encoding="utf-8")

    stats = {}
    for frame in CHECK_FRAMES:
        stats[str(frame)] = analyze_replay(replay, upto=frame).as_dict()
    tree = decompose(replay)
    boundaries = {
        "subgames": [[sg.start, sg.end] for sg in tree.subgames],
        "chains": [
            {
                "team": chain.team.value,
                "start": chain.start,
                "end": chain.end,
                "nodes": [[n.player, n.start, n.end] for n in chain.nodes],
            }
            for sg in tree.subgames
            for chain in sg.chains
        ],
    }
    (OUT / "golden_3000.stats.json").write_text(
        json.dumps({"frames": stats, "decomposition": boundaries}, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )

    # A small malformed replay for error-path tests.
    text = write_replay(replay)
    lines = text.splitlines()[:12]
    lines[-1] = lines[-1][:40]
    (OUT / "truncated.rpl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
