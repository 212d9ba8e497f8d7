"""Self-play pipelines: iterated best response against a Nash mixture, and
league training with a main agent plus exploiters.

Both pipelines share one best-response trainer that runs either
synchronously (produce a batch, train on it, publish, repeat; bitwise
reproducible for a fixed master seed regardless of worker count) or
asynchronously (rollout workers and the trainer run concurrently through
the bounded episode buffer, with sample reuse).
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..game.matrix import MatrixGame
from ..game.minipitch import MiniPitch
from ..game.types import MiniPitchConfig, Team
from ..learner import (
    LearnerConfig,
    Policy,
    TabularActor,
    best_response_exact,
    built_in_ai,
)
from ..metagame import (
    EloTable,
    NashResult,
    exploitability,
    pfsp_distribution,
    solve_nash,
)
from ..rewards import RewardConfig
from .buffers import Episode, EpisodeBuffer, PolicyServer
from .evaluate import evaluate, evaluate_matrix
from .rollout import play_match, run_rollout_worker, sample_opponent
from .tasks import (
    PolicyHandle,
    Population,
    RolloutTask,
    StopCriterion,
    TrainTask,
    stable_seed,
)
from .training import BRTrainer, run_training_loop


@dataclass
class PipelineConfig:
    generations: int = 3
    seed: int = 0
    mode: str = "sync"  # sync | async
    workers: int = 2
    episodes_per_pair: int = 50
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    reward: RewardConfig = field(default_factory=lambda: RewardConfig("dense"))
    stop: StopCriterion = field(default_factory=StopCriterion)
    batch_episodes: int = 8
    buffer_capacity: int = 1024
    reuse_cap: int = 2
    staleness_bound: int = 4
    nash_tol: float = 1e-3
    pfsp_weighting: str = "hard"
    step_latency: float = 0.0
    max_episode_steps: Optional[int] = None
    # Optional per-generation sample budgets (last entry repeats); later
    # generations face stronger mixtures and need more training.
    budget_schedule: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.mode not in ("sync", "async"):
            raise ValueError(f"unknown pipeline mode {self.mode!r}")
        if self.generations < 0:
            raise ValueError("generations cannot be negative")
        if self.workers < 1:
            raise ValueError("need at least one worker")

    def for_generation(self, gen: int) -> "PipelineConfig":
        if not self.budget_schedule:
            return self
        budget = self.budget_schedule[min(gen - 1, len(self.budget_schedule) - 1)]
        from dataclasses import replace

        return replace(
            self,
            learner=replace(self.learner, step_budget=budget),
            stop=replace(self.stop, max_env_steps=budget),
        )


@dataclass
class GenerationRecord:
    generation: int
    policy_id: str
    nash: dict[str, float]
    nash_exploitability: float
    elo: dict[str, float]
    train_samples: int
    wall_clock: float


@dataclass
class BRRunStats:
    consumed_samples: int
    produced_episodes: int
    wall_clock: float
    metrics: list[tuple[float, int, float]]  # (seconds, samples, win rate)
    opponent_log: list[str]
    publications: int
    batch_updates: int
    stopped_early: bool
    consumption_counts: dict = field(default_factory=dict)


@dataclass
class PipelineResult:
    kind: str
    population: Population
    generations: list[GenerationRecord]
    elo_history: list[tuple[int, dict[str, float]]]
    nash_history: list[tuple[int, dict[str, float]]]
    metrics: list[tuple[float, int, float]]


# -- best-response machinery ------------------------------------------------------


def train_best_response_pipeline(
    env_config: MiniPitchConfig,
    opponent_ids: Sequence[str],
    opponent_probs: Sequence[float],
    opponent_lookup: Callable[[str], Policy],
    config: PipelineConfig,
    policy_id: str,
    base: Optional[Policy] = None,
    seed: int = 0,
) -> tuple[Policy, BRRunStats]:
    """Train one best response against a fixed opponent mixture."""
    task = RolloutTask(
        env_fingerprint=env_config.fingerprint(),
        opponent_ids=tuple(opponent_ids),
        opponent_probs=tuple(opponent_probs),
        episodes=None,
        buffer_id="train",
        seed=seed,
        max_episode_steps=config.max_episode_steps,
        step_latency=config.step_latency,
    )
    if config.mode == "sync":
        return _train_sync(env_config, task, opponent_lookup, config, policy_id, base)
    return _train_async(env_config, task, opponent_lookup, config, policy_id, base)


def _train_sync(
    env_config: MiniPitchConfig,
    task: RolloutTask,
    opponent_lookup: Callable[[str], Policy],
    config: PipelineConfig,
    policy_id: str,
    base: Optional[Policy],
) -> tuple[Policy, BRRunStats]:
    """Batched produce-then-train loop.

    Episode seeds and opponent draws depend only on (master seed, episode
    ordinal), and batches are trained in ordinal order, so results are
    identical for any worker count.
    """
    server = PolicyServer()
    trainer = BRTrainer(
        policy_id,
        config.learner,
        base=base,
        env_fingerprint=env_config.fingerprint(),
        sample_budget=config.stop.max_env_steps,
    )
    trainer.publish(server)
    t0 = time.perf_counter()
    metrics: list[tuple[float, int, float]] = []
    opponent_log: list[str] = []
    produced_episodes = 0
    ordinal = 0

    def play_one(o: int, policy: Policy):
        opp_id = sample_opponent(task, 0, o)
        opponent = opponent_lookup(opp_id)
        ep_seed = stable_seed(task.seed, 0, o, "episode")
        env = MiniPitch(env_config)
        side = Team.LEFT if o % 2 == 0 else Team.RIGHT
        learner_actor = TabularActor(policy.data)
        opp_actor = opponent.start_episode()
        result = play_match(
            env,
            learner_actor if side is Team.LEFT else opp_actor,
            opp_actor if side is Team.LEFT else learner_actor,
            seed=ep_seed,
            reward_config=config.reward,
            collect_side=side,
            sharing=config.learner.parameter_sharing,
            max_steps=task.max_episode_steps,
            step_latency=task.step_latency,
        )
        score = result.score if side is Team.LEFT else (result.score[1], result.score[0])
        return opp_id, result, score

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        while not trainer.should_stop(config.stop):
            policy = server.latest(policy_id)
            ordinals = list(range(ordinal, ordinal + config.batch_episodes))
            ordinal += config.batch_episodes
            outs = list(pool.map(lambda o: play_one(o, policy), ordinals))
            for (opp_id, result, score), o in zip(outs, ordinals):
                opponent_log.append(opp_id)
                produced_episodes += 1
                trainer.train_episode(
                    Episode(
                        seed=0,
                        opponent_id=opp_id,
                        policy_version=policy.version,
                        steps=result.steps,
                        score=score,
                        transitions=result.transitions,
                        worker=0,
                        ordinal=o,
                    )
                )
            trainer.stats.batch_updates += 1
            trainer.publish(server)
            rate = trainer.stats.window_win_rate(config.stop.window)
            metrics.append(
                (
                    time.perf_counter() - t0,
                    trainer.stats.consumed_samples,
                    rate if rate is not None else float("nan"),
                )
            )
    final = trainer.publish(server)
    stats = BRRunStats(
        consumed_samples=trainer.stats.consumed_samples,
        produced_episodes=produced_episodes,
        wall_clock=time.perf_counter() - t0,
        metrics=metrics,
        opponent_log=opponent_log,
        publications=trainer.stats.publications,
        batch_updates=trainer.stats.batch_updates,
        stopped_early=trainer.stats.stopped_early,
        consumption_counts=dict(trainer.stats.consumption_counts),
    )
    return final, stats


def _train_async(
    env_config: MiniPitchConfig,
    task: RolloutTask,
    opponent_lookup: Callable[[str], Policy],
    config: PipelineConfig,
    policy_id: str,
    base: Optional[Policy],
) -> tuple[Policy, BRRunStats]:
    """Rollout workers and the trainer run concurrently over the buffer."""
    server = PolicyServer()
    buffer = EpisodeBuffer(
        capacity=config.buffer_capacity,
        reuse_cap=config.reuse_cap,
        staleness_bound=config.staleness_bound,
    )
    trainer = BRTrainer(
        policy_id,
        config.learner,
        base=base,
        env_fingerprint=env_config.fingerprint(),
        sample_budget=config.stop.max_env_steps,
    )
    # Publish before any worker starts: they fetch the newest version
    # for every episode they play.
    trainer.publish(server)
    stop_event = threading.Event()
    opponent_log: list[str] = []
    produced = [0] * config.workers
    t0 = time.perf_counter()
    metrics: list[tuple[float, int, float]] = []

    def worker(widx: int) -> None:
        def log_opponent(opp_id: str) -> None:
            opponent_log.append(opp_id)

        produced[widx] = run_rollout_worker(
            task,
            widx,
            lambda: MiniPitch(env_config),
            server,
            opponent_lookup,
            buffer,
            policy_id,
            config.reward,
            stop_flag=stop_event.is_set,
            on_opponent=log_opponent,
        )

    def sampler() -> None:
        while not stop_event.is_set():
            rate = trainer.stats.window_win_rate(config.stop.window)
            metrics.append(
                (
                    time.perf_counter() - t0,
                    trainer.stats.consumed_samples,
                    rate if rate is not None else float("nan"),
                )
            )
            time.sleep(0.25)

    threads = [
        threading.Thread(target=worker, args=(w,), daemon=True)
        for w in range(config.workers)
    ]
    sampler_thread = threading.Thread(target=sampler, daemon=True)
    train_task = TrainTask(
        buffer_id=task.buffer_id,
        policy_id=policy_id,
        stop=config.stop,
        batch_episodes=config.batch_episodes,
    )
    for t in threads:
        t.start()
    sampler_thread.start()
    try:
        final, tstats = run_training_loop(
            train_task,
            buffer,
            server,
            config.learner,
            base=base,
            mode="async",
            env_fingerprint=env_config.fingerprint(),
            trainer=trainer,
        )
    finally:
        stop_event.set()
        buffer.close()
        for t in threads:
            t.join(timeout=30.0)
        sampler_thread.join(timeout=5.0)
    stats = BRRunStats(
        consumed_samples=tstats.consumed_samples,
        produced_episodes=buffer.produced,
        wall_clock=time.perf_counter() - t0,
        metrics=metrics,
        opponent_log=opponent_log,
        publications=tstats.publications,
        batch_updates=tstats.batch_updates,
        stopped_early=tstats.stopped_early,
        consumption_counts=dict(tstats.consumption_counts),
    )
    return final, stats


# -- PSRO ------------------------------------------------------------------------


def initial_matrix_population(game: MatrixGame, rows: Sequence[int] = (0,)) -> Population:
    from ..learner import pure_matrix_policy

    handles = []
    for r in rows:
        handles.append(
            PolicyHandle(
                pure_matrix_policy(game, r, f"seed-{r}"),
                role="built_in",
                generation=0,
            )
        )
    return Population(handles)


def initial_pitch_population(env_config: MiniPitchConfig, difficulty: int = 0) -> Population:
    return Population(
        [
            PolicyHandle(
                built_in_ai(difficulty, env_config.fingerprint()),
                role="built_in",
                generation=0,
            )
        ]
    )


def _fill_matrix_payoff(population: Population, game: MatrixGame) -> None:
    """Exact expected results for every unrecorded pair, diagonal included."""
    for i, a in enumerate(population.members):
        for b in population.members[i:]:
            games, *_ = population.payoff.cell(a.id, b.id)
            if games > 0:
                continue
            wins, draws, losses, value = evaluate_matrix(a.policy, b.policy, game)
            population.payoff.record(a.id, b.id, wins, draws, losses, value)


def extend_pitch_payoff(
    population: Population,
    new_id: str,
    env_config: MiniPitchConfig,
    episodes: int,
    seed: int,
) -> None:
    new_policy = population.get(new_id).policy
    for member in population.members:
        result = evaluate(
            new_policy,
            member.policy,
            episodes,
            env_config,
            seed=stable_seed(seed, "payoff", new_id, member.id),
        )
        population.payoff.record(
            new_id,
            member.id,
            result.wins,
            result.draws,
            result.losses,
            result.mean_goal_diff * result.episodes,
        )


def matrix_population_mixture(
    population: Population, game: MatrixGame, nash: NashResult
) -> np.ndarray:
    """Map a metagame mixture over members to a base-game mixed strategy."""
    combined = np.zeros(game.n_rows)
    for prob, member in zip(nash.row, population.members):
        combined += prob * member.policy.mixed_strategy()
    total = combined.sum()
    return combined / total if total > 0 else combined


def matrix_population_exploitability(
    population: Population, game: MatrixGame, tol: float = 1e-3
) -> float:
    m = population.payoff.matrix("goal_difference")
    nash = solve_nash(m, tol=tol)
    mix = matrix_population_mixture(population, game, nash)
    return exploitability(game.payoff, mix, mix)


def run_psro(
    env: Union[MatrixGame, MiniPitchConfig],
    population: Optional[Population],
    generations: int,
    config: PipelineConfig,
) -> PipelineResult:
    """Iterated best response against the Nash mixture of the empirical
    payoff matrix; each generation appends one policy and extends the table
    with simulations against the new member only."""
    if isinstance(env, MatrixGame):
        return _run_psro_matrix(env, population, generations, config)
    return _run_psro_pitch(env, population, generations, config)


def _run_psro_matrix(
    game: MatrixGame,
    population: Optional[Population],
    generations: int,
    config: PipelineConfig,
) -> PipelineResult:
    if population is None:
        population = initial_matrix_population(game)
    _fill_matrix_payoff(population, game)
    records: list[GenerationRecord] = []
    elo_history: list[tuple[int, dict[str, float]]] = []
    nash_history: list[tuple[int, dict[str, float]]] = []
    existing = population.by_role("best_response")
    prev: Optional[Policy] = existing[-1].policy if existing else None
    start_gen = len(existing) + 1
    for gen in range(start_gen, start_gen + generations):
        t0 = time.perf_counter()
        m = population.payoff.matrix("goal_difference")
        nash = solve_nash(m, tol=config.nash_tol)
        mixture = dict(zip(population.ids(), (float(p) for p in nash.row)))
        combined = matrix_population_mixture(population, game, nash)
        br = best_response_exact(game, combined, policy_id=f"br-{gen}")
        if prev is not None:
            br = Policy(
                id=br.id,
                kind=br.kind,
                version=prev.version + 1,
                env_fingerprint=br.env_fingerprint,
                data=br.data,
            )
        handle = PolicyHandle(br, role="best_response", generation=gen)
        handle.opponent_log = [f"nash:{mixture}"]
        population.add(handle)
        _fill_matrix_payoff(population, game)
        elo = EloTable.from_log(population.payoff.log).ratings
        elo_history.append((gen, dict(elo)))
        nash_history.append((gen, mixture))
        records.append(
            GenerationRecord(
                generation=gen,
                policy_id=br.id,
                nash=mixture,
                nash_exploitability=nash.exploitability,
                elo=dict(elo),
                train_samples=0,
                wall_clock=time.perf_counter() - t0,
            )
        )
        prev = br
    return PipelineResult(
        kind="psro",
        population=population,
        generations=records,
        elo_history=elo_history,
        nash_history=nash_history,
        metrics=[],
    )


def _run_psro_pitch(
    env_config: MiniPitchConfig,
    population: Optional[Population],
    generations: int,
    config: PipelineConfig,
) -> PipelineResult:
    if population is None:
        population = initial_pitch_population(env_config)
    if len(population) > 1:
        # Seed table: simulate any unrecorded pairs among initial members.
        for i, a in enumerate(population.members):
            for b in population.members[i:]:
                games, *_ = population.payoff.cell(a.id, b.id)
                if games == 0:
                    result = evaluate(
                        a.policy,
                        b.policy,
                        config.episodes_per_pair,
                        env_config,
                        seed=stable_seed(config.seed, "seed-payoff", a.id, b.id),
                    )
                    population.payoff.record(
                        a.id,
                        b.id,
                        result.wins,
                        result.draws,
                        result.losses,
                        result.mean_goal_diff * result.episodes,
                    )
    records: list[GenerationRecord] = []
    elo_history: list[tuple[int, dict[str, float]]] = []
    nash_history: list[tuple[int, dict[str, float]]] = []
    all_metrics: list[tuple[float, int, float]] = []
    existing = population.by_role("best_response")
    prev: Optional[Policy] = existing[-1].policy if existing else None
    start_gen = len(existing) + 1
    for gen in range(start_gen, start_gen + generations):
        t0 = time.perf_counter()
        ids = population.ids()
        if len(ids) == 1:
            mixture = {ids[0]: 1.0}
            nash_expl = 0.0
        else:
            m = population.payoff.matrix("winrate")
            nash = solve_nash(m, tol=config.nash_tol)
            mixture = dict(zip(ids, (float(p) for p in nash.row)))
            nash_expl = nash.exploitability
        probs = np.array([mixture[i] for i in ids])
        probs = probs / probs.sum()
        br, stats = train_best_response_pipeline(
            env_config,
            ids,
            tuple(float(p) for p in probs),
            lambda pid: population.get(pid).policy,
            config.for_generation(gen),
            policy_id=f"br-{gen}",
            base=prev,
            seed=stable_seed(config.seed, "psro-gen", gen),
        )
        handle = PolicyHandle(br, role="best_response", generation=gen)
        handle.opponent_log = stats.opponent_log
        population.add(handle)
        extend_pitch_payoff(
            population,
            br.id,
            env_config,
            config.episodes_per_pair,
            seed=stable_seed(config.seed, "refresh", gen),
        )
        elo = EloTable.from_log(population.payoff.log).ratings
        elo_history.append((gen, dict(elo)))
        nash_history.append((gen, mixture))
        all_metrics.extend(stats.metrics)
        records.append(
            GenerationRecord(
                generation=gen,
                policy_id=br.id,
                nash=mixture,
                nash_exploitability=nash_expl,
                elo=dict(elo),
                train_samples=stats.consumed_samples,
                wall_clock=time.perf_counter() - t0,
            )
        )
        prev = br
    return PipelineResult(
        kind="psro",
        population=population,
        generations=records,
        elo_history=elo_history,
        nash_history=nash_history,
        metrics=all_metrics,
    )


# -- league training -----------------------------------------------------------


def run_league(
    env_config: MiniPitchConfig,
    initial_main: Optional[Policy],
    generations: int,
    config: PipelineConfig,
    population: Optional[Population] = None,
) -> PipelineResult:
    """Main agent improves against a prioritized mixture of the population;
    after each generation a fresh exploiter targets the frozen main."""
    if population is None:
        population = initial_pitch_population(env_config)
    records: list[GenerationRecord] = []
    elo_history: list[tuple[int, dict[str, float]]] = []
    nash_history: list[tuple[int, dict[str, float]]] = []
    all_metrics: list[tuple[float, int, float]] = []
    mains = population.by_role("main_agent")
    main_prev = mains[-1].policy if mains else initial_main
    start_gen = len(mains) + 1
    for gen in range(start_gen, start_gen + generations):
        t0 = time.perf_counter()
        ids = population.ids()
        win_rates = []
        for member_id in ids:
            games, wins, draws = 0.0, 0.0, 0.0
            if main_prev is not None:
                games, wins, draws, _losses, _gd = _cell_or_zero(
                    population, main_prev.id, member_id
                )
            win_rates.append((wins + 0.5 * draws) / games if games > 0 else 0.5)
        probs = pfsp_distribution(win_rates, config.pfsp_weighting)
        mixture = dict(zip(ids, (float(p) for p in probs)))
        main, main_stats = train_best_response_pipeline(
            env_config,
            ids,
            tuple(float(p) for p in probs),
            lambda pid: population.get(pid).policy,
            config,
            policy_id=f"main-{gen}",
            base=main_prev,
            seed=stable_seed(config.seed, "league-main", gen),
        )
        main_handle = PolicyHandle(main, role="main_agent", generation=gen)
        main_handle.opponent_log = main_stats.opponent_log
        population.add(main_handle)
        extend_pitch_payoff(
            population,
            main.id,
            env_config,
            config.episodes_per_pair,
            seed=stable_seed(config.seed, "league-refresh-main", gen),
        )
        # The stop criterion ended the main's training, so the exploiter
        # phase follows unconditionally.
        exploiter, exp_stats = train_best_response_pipeline(
            env_config,
            (main.id,),
            (1.0,),
            lambda pid: population.get(pid).policy,
            config,
            policy_id=f"exploiter-{gen}",
            base=None,
            seed=stable_seed(config.seed, "league-exploiter", gen),
        )
        exp_handle = PolicyHandle(exploiter, role="exploiter", generation=gen)
        exp_handle.opponent_log = exp_stats.opponent_log
        population.add(exp_handle)
        extend_pitch_payoff(
            population,
            exploiter.id,
            env_config,
            config.episodes_per_pair,
            seed=stable_seed(config.seed, "league-refresh-exp", gen),
        )
        elo = EloTable.from_log(population.payoff.log).ratings
        elo_history.append((gen, dict(elo)))
        nash_history.append((gen, mixture))
        all_metrics.extend(main_stats.metrics)
        all_metrics.extend(exp_stats.metrics)
        records.append(
            GenerationRecord(
                generation=gen,
                policy_id=main.id,
                nash=mixture,
                nash_exploitability=0.0,
                elo=dict(elo),
                train_samples=main_stats.consumed_samples
                + exp_stats.consumed_samples,
                wall_clock=time.perf_counter() - t0,
            )
        )
        main_prev = main
    return PipelineResult(
        kind="league",
        population=population,
        generations=records,
        elo_history=elo_history,
        nash_history=nash_history,
        metrics=all_metrics,
    )


def _cell_or_zero(population: Population, a: str, b: str):
    if a not in population.payoff.ids:
        return (0, 0.0, 0.0, 0.0, 0.0)
    games, wins, draws, losses, gd = population.payoff.cell(a, b)
    return (games, wins, draws, losses, gd)
