"""Task descriptions and population bookkeeping for the training system."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..learner import Policy
from ..metagame import PayoffTable


def stable_seed(*parts) -> int:
    """63-bit deterministic seed derived from arbitrary parts."""
    key = "|".join(str(p) for p in parts)
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") & 0x7FFFFFFFFFFFFFFF


@dataclass(frozen=True)
class StopCriterion:
    max_env_steps: int = 100_000
    target_win_rate: Optional[float] = 0.95
    window: int = 100

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("evaluation window must be at least 1 episode")


@dataclass(frozen=True)
class RolloutTask:
    """What one rollout worker runs: an environment, an opponent mixture
    and a production quota."""

    env_fingerprint: str
    opponent_ids: tuple[str, ...]
    opponent_probs: tuple[float, ...]
    episodes: Optional[int]  # None: produce until the buffer closes
    buffer_id: str
    seed: int = 0
    max_episode_steps: Optional[int] = None
    step_latency: float = 0.0  # injected seconds per env step

    def __post_init__(self) -> None:
        if self.episodes is not None and self.episodes <= 0:
            raise ValueError("episode quota must be positive")
        if len(self.opponent_ids) != len(self.opponent_probs):
            raise ValueError("opponent distribution shape mismatch")
        if abs(sum(self.opponent_probs) - 1.0) > 1e-9:
            raise ValueError("opponent probabilities must sum to 1")


@dataclass(frozen=True)
class TrainTask:
    buffer_id: str
    policy_id: str
    stop: StopCriterion
    batch_episodes: int = 8
    publish_every: int = 1  # batches between policy publications


@dataclass
class PolicyHandle:
    policy: Policy
    role: str  # built_in | best_response | main_agent | exploiter
    generation: int
    opponent_log: list[str] = field(default_factory=list)

    @property
    def id(self) -> str:
        return self.policy.id


class Population:
    """Ordered policy set with role tags and the shared payoff table."""

    ROLES = ("built_in", "best_response", "main_agent", "exploiter")

    def __init__(self, members: Sequence[PolicyHandle] = ()):
        self.members: list[PolicyHandle] = []
        self.payoff = PayoffTable()
        for handle in members:
            self.add(handle)

    def add(self, handle: PolicyHandle) -> None:
        if handle.role not in self.ROLES:
            raise ValueError(f"unknown population role {handle.role!r}")
        if any(m.id == handle.id for m in self.members):
            raise ValueError(f"duplicate population member {handle.id!r}")
        self.members.append(handle)
        self.payoff.add_policy(handle.id)

    def ids(self) -> list[str]:
        return [m.id for m in self.members]

    def get(self, policy_id: str) -> PolicyHandle:
        for m in self.members:
            if m.id == policy_id:
                return m
        raise KeyError(policy_id)

    def by_role(self, role: str) -> list[PolicyHandle]:
        return [m for m in self.members if m.role == role]

    def __len__(self) -> int:
        return len(self.members)
