"""Empirical-game layer: payoff bookkeeping, Nash solving by fictitious
play, exploitability, Elo ratings and prioritized opponent distributions.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ELO_INITIAL = 1000.0
ELO_K = 32.0
NASH_TOL = 1e-3
NASH_ITER_CAP = 10**6


@dataclass
class MatchRecord:
    """One simulated pairing, appended in play order; `outcome_a` is the
    first policy's score in [0, 1] (fractional outcomes allowed)."""

    ts: int
    a: str
    b: str
    outcome_a: float
    games: float = 1.0
    wins_a: float = 0.0
    draws: float = 0.0
    losses_a: float = 0.0
    goal_diff_a: float = 0.0


@dataclass
class _Cell:
    games: float = 0.0
    wins: float = 0.0
    draws: float = 0.0
    losses: float = 0.0
    gd_sum: float = 0.0


class PayoffTable:
    """Pairwise simulation results over an ordered set of policy ids.

    Counts may be fractional: exact matrix-game evaluation records expected
    win/draw/loss probabilities instead of sampled episodes.
    """

    def __init__(self, policy_ids: Iterable[str] = ()):
        self.ids: list[str] = []
        self._cells: dict[tuple[str, str], _Cell] = {}
        self.log: list[MatchRecord] = []
        self._ts = 0
        for pid in policy_ids:
            self.add_policy(pid)

    def add_policy(self, policy_id: str) -> None:
        if policy_id in self.ids:
            raise ValueError(f"duplicate policy id {policy_id!r}")
        self.ids.append(policy_id)

    def index(self, policy_id: str) -> int:
        return self.ids.index(policy_id)

    def record(
        self,
        a: str,
        b: str,
        wins: float,
        draws: float,
        losses: float,
        goal_diff: float = 0.0,
    ) -> None:
        """Record results from a's perspective; the mirrored cell updates too."""
        if a not in self.ids or b not in self.ids:
            raise KeyError("both policies must be members of the table")
        games = wins + draws + losses
        if games <= 0:
            return
        cell = self._cells.setdefault((a, b), _Cell())
        cell.games += games
        cell.wins += wins
        cell.draws += draws
        cell.losses += losses
        cell.gd_sum += goal_diff
        if a != b:
            mirror = self._cells.setdefault((b, a), _Cell())
            mirror.games += games
            mirror.wins += losses
            mirror.draws += draws
            mirror.losses += wins
            mirror.gd_sum -= goal_diff
        self._ts += 1
        self.log.append(
            MatchRecord(
                ts=self._ts,
                a=a,
                b=b,
                outcome_a=(wins + 0.5 * draws) / games,
                games=games,
                wins_a=wins,
                draws=draws,
                losses_a=losses,
                goal_diff_a=goal_diff,
            )
        )

    def cell(self, a: str, b: str) -> tuple[float, float, float, float, float]:
        c = self._cells.get((a, b), _Cell())
        mean_gd = c.gd_sum / c.games if c.games else 0.0
        return (c.games, c.wins, c.draws, c.losses, mean_gd)

    def matrix(self, metric: str = "winrate") -> np.ndarray:
        """Antisymmetric payoff matrix: (wins-losses)/games or mean goal diff."""
        if metric not in ("winrate", "goal_difference"):
            raise ValueError(f"unknown payoff metric {metric!r}")
        n = len(self.ids)
        out = np.zeros((n, n))
        for i, a in enumerate(self.ids):
            for j, b in enumerate(self.ids):
                c = self._cells.get((a, b))
                if c is None or c.games == 0:
                    continue
                if metric == "winrate":
                    out[i, j] = (c.wins - c.losses) / c.games
                else:
                    out[i, j] = c.gd_sum / c.games
        return out

    def to_csv(self, metric: str = "winrate") -> str:
        m = self.matrix(metric)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["policy"] + self.ids)
        for i, pid in enumerate(self.ids):
            writer.writerow([pid] + [f"{v:.6f}" for v in m[i]])
        return buf.getvalue()


# -- Nash ---------------------------------------------------------------------


@dataclass(frozen=True)
class NashResult:
    row: np.ndarray
    col: np.ndarray
    value: float
    exploitability: float
    iterations: int
    converged: bool


def exploitability(
    payoff: np.ndarray, row: Sequence[float], col: Sequence[float]
) -> float:
    """Sum of both sides' best-response gains over the profile value; zero
    exactly at a Nash equilibrium."""
    a = np.asarray(payoff, dtype=float)
    r = np.asarray(row, dtype=float)
    c = np.asarray(col, dtype=float)
    value = float(r @ a @ c)
    best_row = float(np.max(a @ c))
    worst_col = float(np.min(r @ a))
    return (best_row - value) + (value - worst_col)


def solve_nash(
    payoff: np.ndarray,
    tol: float = NASH_TOL,
    iteration_cap: int = NASH_ITER_CAP,
    check_every: int = 250,
) -> NashResult:
    """Alternating fictitious play with lowest-index tie-breaking.

    Runs until the averaged strategies' exploitability drops to `tol` or the
    iteration cap is hit; a capped run is returned flagged, carrying the
    exploitability it achieved.
    """
    a = np.asarray(payoff, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("payoff must be a non-empty 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("payoff entries must be finite")
    m, n = a.shape
    if m == 1 and n == 1:
        one = np.array([1.0])
        return NashResult(one, one.copy(), float(a[0, 0]), 0.0, 0, True)

    # Plain-list inner loop: the matrices are tiny (population size), where
    # per-call numpy overhead would dominate.
    rows = [tuple(float(x) for x in a[i, :]) for i in range(m)]
    cols = [tuple(float(x) for x in a[:, j]) for j in range(n)]
    row_counts = [0] * m
    col_counts = [0] * n
    row_acc = [0.0] * m  # A @ col_counts
    col_acc = [0.0] * n  # row_counts @ A
    t = 0

    def averaged() -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array(row_counts, dtype=float) / t,
            np.array(col_counts, dtype=float) / t,
        )

    while t < iteration_cap:
        upto = min(t + check_every, iteration_cap)
        while t < upto:
            r = 0
            best = row_acc[0]
            for i in range(1, m):
                if row_acc[i] > best:
                    best = row_acc[i]
                    r = i
            row_counts[r] += 1
            ar = rows[r]
            for j in range(n):
                col_acc[j] += ar[j]
            c = 0
            worst = col_acc[0]
            for j in range(1, n):
                if col_acc[j] < worst:
                    worst = col_acc[j]
                    c = j
            col_counts[c] += 1
            ac = cols[c]
            for i in range(m):
                row_acc[i] += ac[i]
            t += 1
        row, col = averaged()
        e = exploitability(a, row, col)
        if e <= tol:
            return NashResult(row, col, float(row @ a @ col), e, t, True)
    row, col = averaged()
    e = exploitability(a, row, col)
    return NashResult(row, col, float(row @ a @ col), e, t, False)


# -- Elo ------------------------------------------------------------------------


def elo_expected(ra: float, rb: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((rb - ra) / 400.0))


def elo_update(
    ra: float, rb: float, outcome_a: float, k: float = ELO_K
) -> tuple[float, float]:
    """outcome_a is 1 for a win, 0.5 for a draw, 0 for a loss."""
    if not 0.0 <= outcome_a <= 1.0:
        raise ValueError("outcome must lie in [0, 1]")
    ea = elo_expected(ra, rb)
    delta = k * (outcome_a - ea)
    return ra + delta, rb - delta


class EloTable:
    """Sequential Elo over a match log; ties in timestamps are ordered by a
    seeded hash so replays of the same log reproduce identical ratings."""

    def __init__(self, k_factor: float = ELO_K, initial: float = ELO_INITIAL,
                 tie_seed: int = 0):
        self.k_factor = k_factor
        self.initial = initial
        self.tie_seed = tie_seed
        self.ratings: dict[str, float] = {}

    def rating(self, policy_id: str) -> float:
        return self.ratings.get(policy_id, self.initial)

    def apply(self, record: MatchRecord) -> None:
        ra = self.rating(record.a)
        rb = self.rating(record.b)
        ra2, rb2 = elo_update(ra, rb, record.outcome_a, self.k_factor)
        self.ratings[record.a] = ra2
        self.ratings[record.b] = rb2

    def replay(self, log: Sequence[MatchRecord]) -> None:
        def tie_key(r: MatchRecord) -> tuple[int, str]:
            digest = hashlib.blake2b(
                f"{self.tie_seed}|{r.a}|{r.b}".encode(), digest_size=8
            ).hexdigest()
            return (r.ts, digest)

        for rec in sorted(log, key=tie_key):
            self.apply(rec)

    @classmethod
    def from_log(
        cls, log: Sequence[MatchRecord], k_factor: float = ELO_K
    ) -> "EloTable":
        table = cls(k_factor=k_factor)
        table.replay(log)
        return table


# -- PFSP -----------------------------------------------------------------------


def pfsp_distribution(
    win_rates: Sequence[float], weighting: str = "hard"
) -> np.ndarray:
    """Opponent mixture favoring the members we beat least.

    `hard` weights (1 - winrate)^2; `even` is uniform over members not yet
    fully beaten. A degenerate all-zero weight vector falls back to uniform.
    """
    w = np.asarray(win_rates, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("need a non-empty win-rate vector")
    if np.any((w < 0) | (w > 1)):
        raise ValueError("win rates must lie in [0, 1]")
    if weighting == "hard":
        weights = (1.0 - w) ** 2
    elif weighting == "even":
        weights = (w < 1.0).astype(float)
    else:
        raise ValueError(f"unknown PFSP weighting {weighting!r}")
    total = weights.sum()
    if total <= 0.0:
        return np.full(w.size, 1.0 / w.size)
    return weights / total


def elo_history_csv(
    history: Sequence[tuple[int, dict[str, float]]]
) -> str:
    """CSV of per-generation Elo snapshots: generation, policy, rating."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["generation", "policy", "elo"])
    for gen, ratings in history:
        for pid, rating in ratings.items():
            writer.writerow([gen, pid, f"{rating:.4f}"])
    return buf.getvalue()
