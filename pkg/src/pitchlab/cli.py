"""Command line entry point: train, evaluate, analyze, serve, replay-dump.

Exit codes: 0 success, 2 usage, 3 configuration, 4 runtime failure.
Set PITCHLAB_LOG=debug for verbose progress on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from pathlib import Path

from . import learner
from .analysis import (
    analyze_replay,
    crossplay_matrix,
    decompose,
    load_replay,
    radar_csv,
    style_radar,
)
from .analysis.replay import ReplayError
from .game.config import parse_env_spec
from .game.matrix import MatrixGame
from .game.types import MiniPitchConfig
from .learner import LearnerConfig
from .orchestrator import (
    PipelineConfig,
    PolicyHandle,
    StopCriterion,
    evaluate,
    initial_pitch_population,
    run_league,
    run_psro,
    train_best_response_pipeline,
)
from .orchestrator.rundir import write_run_dir
from .ranking import RankingService, make_server
from .rewards import config_for

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4


def _log(msg: str) -> None:
    if os.environ.get("PITCHLAB_LOG", "").lower() in ("debug", "info", "1"):
        print(msg, file=sys.stderr)


def _fail(code: int, category: str, msg: str) -> int:
    print(f"error: {category}: {msg}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pitchlab",
        description="Self-play training, metagame analytics and match tools "
        "for gridworld football.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="run a training pipeline")
    train_sub = train.add_subparsers(dest="pipeline", required=True)
    for kind in ("psro", "league", "br"):
        p = train_sub.add_parser(kind)
        p.add_argument("--config", default=None,
                       help="key=value pipeline config file; flags win")
        p.add_argument("--env", default=None, help="rps | matrix:FILE | minipitch[:CFG]")
        p.add_argument("--generations", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--mode", choices=("sync", "async"), default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", default=None, help="run directory")
        p.add_argument("--episodes-per-pair", type=int, default=None)
        p.add_argument("--br-steps", type=int, default=None,
                       help="sample budget per best-response generation")
        p.add_argument("--batch-episodes", type=int, default=None)
        p.add_argument("--reward", default=None,
                       choices=("sparse", "dense", "pressure", "assist", "shaped"))
        p.add_argument("--target-win-rate", type=float, default=None)
        p.add_argument("--stop-window", type=int, default=None)
        p.add_argument("--difficulty", type=int, default=None, choices=(0, 1, 2))

    ev = sub.add_parser("evaluate", help="head-to-head evaluation")
    ev.add_argument("--env", required=True)
    ev.add_argument("policy_a")
    ev.add_argument("policy_b")
    ev.add_argument("-k", "--episodes", type=int, default=20)
    ev.add_argument("--seed", type=int, default=0)

    an = sub.add_parser("analyze", help="decompose replays, style radar")
    an.add_argument("target", help="replay file, or run directory with --radar/--crossplay")
    an.add_argument("--radar", action="store_true")
    an.add_argument("--crossplay", action="store_true")
    an.add_argument("--episodes", type=int, default=10)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--env", default=None, help="env for --radar/--crossplay")
    an.add_argument("--out", default=None, help="write CSV/dump here instead of stdout")

    sv = sub.add_parser("serve", help="run the ranking service")
    sv.add_argument("--port", type=int, default=8008)
    sv.add_argument("--data", required=True, help="data directory")
    sv.add_argument("--static-dir", default=None, help="debugger bundle directory")
    sv.add_argument("--round-episodes", type=int, default=4)

    rd = sub.add_parser("replay-dump", help="print a replay in readable form")
    rd.add_argument("replay")
    rd.add_argument("--frame", type=int, default=None)

    return parser


# -- train -----------------------------------------------------------------------

_TRAIN_DEFAULTS = {
    "env": None,
    "generations": 3,
    "seed": 0,
    "mode": "sync",
    "workers": 2,
    "episodes_per_pair": 50,
    "br_steps": 60_000,
    "batch_episodes": 8,
    "reward": "dense",
    "target_win_rate": 0.95,
    "stop_window": 100,
    "difficulty": 0,
}

_TRAIN_FIELD_TYPES = {
    "generations": int,
    "seed": int,
    "workers": int,
    "episodes_per_pair": int,
    "br_steps": int,
    "batch_episodes": int,
    "target_win_rate": float,
    "stop_window": int,
    "difficulty": int,
}


def _load_train_config(path) -> dict:
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _TRAIN_DEFAULTS:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            caster = _TRAIN_FIELD_TYPES.get(key, str)
            values[key] = caster(value.strip())
    return values


def _resolve_train_args(args) -> None:
    """Config file fills unset flags; explicit flags win; defaults last."""
    file_values = _load_train_config(args.config) if args.config else {}
    for key, default in _TRAIN_DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, file_values.get(key, default))


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        generations=args.generations,
        seed=args.seed,
        mode=args.mode,
        workers=args.workers,
        episodes_per_pair=args.episodes_per_pair,
        learner=LearnerConfig(step_budget=args.br_steps),
        reward=config_for(args.reward),
        stop=StopCriterion(
            max_env_steps=args.br_steps,
            target_win_rate=args.target_win_rate,
            window=args.stop_window,
        ),
        batch_episodes=args.batch_episodes,
    )


def cmd_train(args) -> int:
    try:
        _resolve_train_args(args)
    except (ValueError, OSError) as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    if args.env is None:
        print("error: usage: --env is required (flag or config file)", file=sys.stderr)
        return EXIT_USAGE
    try:
        env = parse_env_spec(args.env)
    except (ValueError, OSError) as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    if args.pipeline in ("league", "br") and isinstance(env, MatrixGame):
        return _fail(
            EXIT_CONFIG, "config", f"{args.pipeline} training needs a minipitch env"
        )
    config = _pipeline_config(args)
    out = Path(args.out) if args.out else Path(f"run-{args.pipeline}-{args.seed}")
    try:
        if args.pipeline == "psro":
            result = run_psro(env, None, args.generations, config)
        elif args.pipeline == "league":
            result = run_league(env, None, args.generations, config)
        else:
            result = _run_br(env, config, args)
    except Exception as exc:
        return _fail(EXIT_RUNTIME, "runtime", str(exc))
    manifest = {
        "run_id": out.name,
        "pipeline": args.pipeline,
        "env": args.env,
        "seed": args.seed,
        "mode": args.mode,
        "workers": args.workers,
        "generations": args.generations,
        "reward": args.reward,
        "br_steps": args.br_steps,
        "episodes_per_pair": args.episodes_per_pair,
    }
    write_run_dir(out, manifest, result)
    _log(f"run directory: {out}")
    print(out)
    return EXIT_OK


def _run_br(env: MiniPitchConfig, config: PipelineConfig, args):
    """Single best-response training against the built-in opponent."""
    from .metagame import EloTable
    from .orchestrator.pipelines import (
        GenerationRecord,
        PipelineResult,
        extend_pitch_payoff,
    )

    population = initial_pitch_population(env, difficulty=args.difficulty)
    opponent = population.members[0]
    policy, stats = train_best_response_pipeline(
        env,
        (opponent.id,),
        (1.0,),
        lambda pid: population.get(pid).policy,
        config,
        policy_id="br-1",
        base=None,
        seed=config.seed,
    )
    handle = PolicyHandle(policy, role="best_response", generation=1)
    handle.opponent_log = stats.opponent_log
    population.add(handle)
    extend_pitch_payoff(population, policy.id, env, config.episodes_per_pair, config.seed)
    elo = EloTable.from_log(population.payoff.log).ratings

    record = GenerationRecord(
        generation=1,
        policy_id=policy.id,
        nash={opponent.id: 1.0},
        nash_exploitability=0.0,
        elo=dict(elo),
        train_samples=stats.consumed_samples,
        wall_clock=stats.wall_clock,
    )
    return PipelineResult(
        kind="br",
        population=population,
        generations=[record],
        elo_history=[(1, dict(elo))],
        nash_history=[(1, {opponent.id: 1.0})],
        metrics=stats.metrics,
    )


# -- evaluate ---------------------------------------------------------------------


def cmd_evaluate(args) -> int:
    try:
        env = parse_env_spec(args.env)
    except (ValueError, OSError) as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    if isinstance(env, MatrixGame):
        return _fail(EXIT_CONFIG, "config", "evaluate needs a minipitch env")
    try:
        pa = learner.from_text(Path(args.policy_a).read_text(encoding="utf-8"))
        pb = learner.from_text(Path(args.policy_b).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    try:
        result = evaluate(pa, pb, args.episodes, env, seed=args.seed)
    except Exception as exc:
        return _fail(EXIT_RUNTIME, "runtime", str(exc))
    print(
        json.dumps(
            {
                "win_rate": result.win_rate,
                "draw_rate": result.draw_rate,
                "loss_rate": result.loss_rate,
                "mean_goal_diff": result.mean_goal_diff,
                "episodes": result.episodes,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


# -- analyze ----------------------------------------------------------------------


def _population_policies(run_dir: Path):
    manifest = json.loads((run_dir / "population.json").read_text(encoding="utf-8"))
    policies = []
    for member in manifest:
        text = (run_dir / member["artifact"]).read_text(encoding="utf-8")
        policies.append(learner.from_text(text))
    return policies


def cmd_analyze(args) -> int:
    target = Path(args.target)
    if args.radar or args.crossplay:
        if args.env is None:
            return _fail(EXIT_CONFIG, "config", "--radar/--crossplay need --env")
        try:
            env = parse_env_spec(args.env)
            policies = _population_policies(target)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            return _fail(EXIT_CONFIG, "config", str(exc))
        if args.radar:
            radar = style_radar(policies, env, args.episodes, args.seed)
            output = radar_csv(radar)
        else:
            output = crossplay_matrix(policies, env, args.episodes, args.seed).to_csv()
        _write_or_print(output, args.out)
        return EXIT_OK
    try:
        replay = load_replay(target)
    except OSError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except ReplayError as exc:
        return _fail(EXIT_RUNTIME, "runtime", str(exc))
    counts = analyze_replay(replay)
    tree = decompose(replay)
    stats_csv = "event,left,right\n" + "".join(
        f"{name},{values['L']},{values['R']}\n"
        for name, values in counts.as_dict().items()
    )
    dump = {
        "counts": counts.as_dict(),
        "subgames": [
            {
                "start": sg.start,
                "end": sg.end,
                "scoring_team": sg.scoring_team.value if sg.scoring_team else None,
                "chains": [
                    {
                        "team": chain.team.value,
                        "nodes": [
                            {"player": n.player, "start": n.start, "end": n.end}
                            for n in chain.nodes
                        ],
                    }
                    for chain in sg.chains
                ],
            }
            for sg in tree.subgames
        ],
    }
    # Stats CSV first, then the decomposition dump, blank-line separated.
    output = stats_csv + "\n" + json.dumps(dump, indent=2, sort_keys=True)
    _write_or_print(output, args.out)
    return EXIT_OK


def _write_or_print(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        print(text)


# -- serve ------------------------------------------------------------------------


def cmd_serve(args) -> int:
    data_dir = Path(args.data)
    try:
        data_dir.mkdir(parents=True, exist_ok=True)
        probe = data_dir / ".write-probe"
        probe.write_text("ok", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        return _fail(EXIT_CONFIG, "config", f"data dir not writable: {exc}")
    try:
        service = RankingService(data_dir, round_episodes=args.round_episodes)
        server = make_server(service, args.port, args.static_dir)
    except OSError as exc:
        return _fail(EXIT_RUNTIME, "runtime", f"cannot bind port {args.port}: {exc}")

    def shutdown(signum, frame):
        del signum, frame
        _log("shutting down; writing snapshot")
        service.snapshot()
        server.shutdown()

    signal.signal(signal.SIGINT, shutdown)
    signal.signal(signal.SIGTERM, shutdown)
    print(f"ranking service on http://127.0.0.1:{args.port} (data: {data_dir})")
    try:
        server.serve_forever()
    finally:
        service.snapshot()
    return EXIT_OK


# -- replay-dump ------------------------------------------------------------------


def cmd_replay_dump(args) -> int:
    try:
        replay = load_replay(args.replay)
    except OSError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except ReplayError as exc:
        return _fail(EXIT_RUNTIME, "runtime", str(exc))
    print(json.dumps(replay.header, sort_keys=True))
    frames = (
        replay.steps
        if args.frame is None
        else replay.steps[args.frame : args.frame + 1]
    )
    for s in frames:
        owner = s.owner()
        owner_txt = "loose" if owner is None else f"{owner[0].value}{owner[1]}"
        print(
            f"t={s.t} score={s.score[0]}-{s.score[1]} mode={s.mode} "
            f"ball=({s.ball.x},{s.ball.y}) owner={owner_txt}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": cmd_train,
        "evaluate": cmd_evaluate,
        "analyze": cmd_analyze,
        "serve": cmd_serve,
        "replay-dump": cmd_replay_dump,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
