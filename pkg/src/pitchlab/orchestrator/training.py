"""Trainer side of the data buffer: consume episodes, update the table,
publish fresh policy versions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from ..learner import LearnerConfig, Policy, QTable
from .buffers import BufferClosed, Episode, EpisodeBuffer, PolicyServer
from .tasks import StopCriterion, TrainTask


@dataclass
class TrainerStats:
    consumed_samples: int = 0
    episodes_consumed: int = 0
    batch_updates: int = 0
    publications: int = 0
    win_history: list[float] = field(default_factory=list)
    consumption_counts: dict = field(default_factory=lambda: defaultdict(int))
    stopped_early: bool = False

    def window_win_rate(self, window: int) -> Optional[float]:
        if len(self.win_history) < window:
            return None
        recent = self.win_history[-window:]
        return sum(recent) / window


class BRTrainer:
    """Applies Q-learning updates from stored episodes and versions the
    resulting policy through the policy server."""

    def __init__(
        self,
        policy_id: str,
        config: LearnerConfig,
        base: Optional[Policy] = None,
        env_fingerprint: str = "",
        sample_budget: Optional[int] = None,
    ):
        self.policy_id = policy_id
        self.config = config
        if base is not None and base.kind == "tabular":
            self.table = QTable(base.data.get("q", {}))
        else:
            self.table = QTable()
        self.version = base.version if base is not None else 0
        self.fingerprint = env_fingerprint or (
            base.env_fingerprint if base is not None else ""
        )
        self.sample_budget = (
            sample_budget if sample_budget is not None else config.step_budget
        )
        self.stats = TrainerStats()

    @property
    def epsilon(self) -> float:
        if self.sample_budget <= 0:
            return self.config.epsilon_final
        frac = min(1.0, self.stats.consumed_samples / self.sample_budget)
        return self.config.epsilon + (self.config.epsilon_final - self.config.epsilon) * frac

    def train_episode(self, episode: Episode) -> None:
        cfg = self.config
        for key, act, reward, next_key, next_allowed, done in episode.transitions:
            self.table.update(
                key, act, reward, next_key, next_allowed, done,
                cfg.learning_rate, cfg.gamma,
            )
        self.stats.consumed_samples += len(episode.transitions)
        self.stats.episodes_consumed += 1
        self.stats.win_history.append(episode.outcome)
        self.stats.consumption_counts[(episode.worker, episode.ordinal)] += 1

    def snapshot(self, bump: bool = True) -> Policy:
        if bump:
            self.version += 1
        return Policy(
            id=self.policy_id,
            kind="tabular",
            version=self.version,
            env_fingerprint=self.fingerprint,
            data={
                "q": self.table.serialize(),
                "sharing": self.config.parameter_sharing,
                "act_epsilon": self.epsilon,
            },
        )

    def publish(self, server: PolicyServer) -> Policy:
        policy = self.snapshot(bump=True)
        server.publish(policy)
        self.stats.publications += 1
        return policy

    def should_stop(self, stop: StopCriterion) -> bool:
        if self.stats.consumed_samples >= stop.max_env_steps:
            return True
        if stop.target_win_rate is not None:
            rate = self.stats.window_win_rate(stop.window)
            if rate is not None and rate >= stop.target_win_rate:
                self.stats.stopped_early = True
                return True
        return False


def run_training_loop(
    task: TrainTask,
    buffer: EpisodeBuffer,
    policy_server: PolicyServer,
    config: LearnerConfig,
    base: Optional[Policy] = None,
    mode: str = "sync",
    env_fingerprint: str = "",
    starvation_timeout: float = 30.0,
    trainer: Optional[BRTrainer] = None,
) -> tuple[Policy, TrainerStats]:
    """Consume until the stop criterion: sync drains exact fresh batches,
    async samples whatever is available under the reuse/staleness rules.

    A zero-step criterion returns the base policy untouched. Starvation
    beyond `starvation_timeout` raises a diagnostic error.
    """
    if mode not in ("sync", "async"):
        raise ValueError(f"unknown training mode {mode!r}")
    if trainer is None:
        trainer = BRTrainer(
            task.policy_id,
            config,
            base=base,
            env_fingerprint=env_fingerprint,
            sample_budget=task.stop.max_env_steps,
        )
    if task.stop.max_env_steps <= 0:
        policy = base if base is not None else trainer.snapshot(bump=False)
        return policy, trainer.stats

    if policy_server.latest_version(task.policy_id) == 0:
        trainer.publish(policy_server)

    try:
        if mode == "sync":
            while not trainer.should_stop(task.stop):
                batch = buffer.take_batch(
                    task.batch_episodes, timeout=starvation_timeout
                )
                for ep in batch:
                    trainer.train_episode(ep)
                trainer.stats.batch_updates += 1
                trainer.publish(policy_server)
        else:
            since_publish = 0
            while not trainer.should_stop(task.stop):
                ep = buffer.sample(trainer.version, timeout=starvation_timeout)
                trainer.train_episode(ep)
                since_publish += 1
                if since_publish >= task.batch_episodes:
                    trainer.stats.batch_updates += 1
                    trainer.publish(policy_server)
                    since_publish = 0
    except BufferClosed:
        pass
    final = trainer.publish(policy_server)
    return final, trainer.stats
