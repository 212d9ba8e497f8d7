"""Shared mutable state between rollout workers and trainers.

The episode buffer is a bounded producer-consumer queue. In synchronous
mode the trainer drains exact batches; in asynchronous mode it samples the
oldest episode whose reuse counter has headroom, so every episode trains at
most `reuse_cap` times and episodes staler than `staleness_bound` policy
versions are evicted unseen.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

from ..learner import Policy


class BufferClosed(Exception):
    pass


class StarvationError(RuntimeError):
    pass


@dataclass
class Episode:
    """One finished match from the learner's perspective."""

    seed: int
    opponent_id: str
    policy_version: int
    steps: int
    score: tuple[int, int]
    # Temporal order preserved: (key, action, reward, next_key, next_allowed, done)
    transitions: list[tuple[str, int, float, str, tuple[int, ...], bool]] = field(
        default_factory=list
    )
    worker: int = 0
    ordinal: int = 0
    reuse_count: int = 0

    @property
    def outcome(self) -> float:
        diff = self.score[0] - self.score[1]
        return 1.0 if diff > 0 else (0.5 if diff == 0 else 0.0)


class EpisodeBuffer:
    def __init__(
        self,
        capacity: int = 1024,
        reuse_cap: int = 2,
        staleness_bound: int = 4,
    ):
        if capacity < 1 or reuse_cap < 1 or staleness_bound < 0:
            raise ValueError("invalid buffer parameters")
        self.capacity = capacity
        self.reuse_cap = reuse_cap
        self.staleness_bound = staleness_bound
        self._items: list[Episode] = []
        self._lock = threading.Lock()
        self._not_empty = threading.Condition(self._lock)
        self._not_full = threading.Condition(self._lock)
        self._closed = False
        self.produced = 0
        self.evicted_stale = 0

    def close(self) -> None:
        with self._lock:
            self._closed = True
            self._not_empty.notify_all()
            self._not_full.notify_all()

    @property
    def closed(self) -> bool:
        return self._closed

    def push(self, episode: Episode, timeout: Optional[float] = None) -> None:
        with self._not_full:
            while len(self._items) >= self.capacity and not self._closed:
                if not self._not_full.wait(timeout):
                    raise TimeoutError("episode buffer stayed full")
            if self._closed:
                raise BufferClosed
            self._items.append(episode)
            self.produced += 1
            self._not_empty.notify()

    def _evict_stale(self, current_version: int) -> None:
        keep = []
        for ep in self._items:
            if ep.policy_version < current_version - self.staleness_bound:
                self.evicted_stale += 1
            else:
                keep.append(ep)
        if len(keep) != len(self._items):
            self._items = keep
            self._not_full.notify_all()

    def take_batch(
        self, n: int, timeout: Optional[float] = None
    ) -> list[Episode]:
        """Synchronous consumption: wait for n fresh episodes, remove them."""
        with self._not_empty:
            while len(self._items) < n and not self._closed:
                if not self._not_empty.wait(timeout):
                    raise StarvationError(
                        f"trainer waited over {timeout}s for a batch of {n}"
                    )
            if len(self._items) < n:
                raise BufferClosed
            batch = self._items[:n]
            self._items = self._items[n:]
            self._not_full.notify_all()
            return sorted(batch, key=lambda e: (e.worker, e.ordinal))

    def sample(
        self, current_version: int, timeout: Optional[float] = None
    ) -> Episode:
        """Asynchronous consumption: oldest episode with reuse headroom."""
        with self._not_empty:
            while True:
                self._evict_stale(current_version)
                if self._items:
                    ep = self._items[0]
                    ep.reuse_count += 1
                    if ep.reuse_count >= self.reuse_cap:
                        self._items.pop(0)
                        self._not_full.notify_all()
                    return ep
                if self._closed:
                    raise BufferClosed
                if not self._not_empty.wait(timeout):
                    raise StarvationError(
                        f"trainer starved for over {timeout}s"
                    )

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


class PolicyServer:
    """Versioned policy store: single writer per id, many readers."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._latest: dict[str, Policy] = {}

    def publish(self, policy: Policy) -> None:
        with self._lock:
            current = self._latest.get(policy.id)
            if current is not None and policy.version <= current.version:
                raise ValueError(
                    f"policy {policy.id!r} version {policy.version} is not newer "
                    f"than published {current.version}"
                )
            self._latest[policy.id] = policy

    def latest(self, policy_id: str) -> Policy:
        with self._lock:
            if policy_id not in self._latest:
                raise KeyError(policy_id)
            return self._latest[policy_id]

    def latest_version(self, policy_id: str) -> int:
        with self._lock:
            pol = self._latest.get(policy_id)
            return 0 if pol is None else pol.version

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._latest)
