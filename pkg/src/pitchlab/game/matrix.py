"""Two-player zero-sum matrix games used as exact desk-scale testbeds."""

from __future__ import annotations

import hashlib

import numpy as np


class MatrixGame:
    """Zero-sum normal-form game; `payoff[r][c]` is the row player's payoff."""

    def __init__(self, payoff):
        a = np.asarray(payoff, dtype=float)
        if a.ndim != 2:
            raise ValueError("payoff must be a 2-D matrix")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoff entries must be finite")
        self.payoff = a

    @property
    def n_rows(self) -> int:
        return self.payoff.shape[0]

    @property
    def n_cols(self) -> int:
        return self.payoff.shape[1]

    def step(self, row_action: int, col_action: int) -> tuple[float, float]:
        if not 0 <= row_action < self.n_rows:
            raise IndexError(f"row action {row_action} out of range")
        if not 0 <= col_action < self.n_cols:
            raise IndexError(f"column action {col_action} out of range")
        v = float(self.payoff[row_action, col_action])
        return v, -v

    def fingerprint(self) -> str:
        digest = hashlib.blake2b(
            self.payoff.tobytes() + bytes(self.payoff.shape), digest_size=8
        ).hexdigest()
        return f"matrix/1:{self.n_rows}x{self.n_cols}:{digest}"


def rock_paper_scissors() -> MatrixGame:
    return MatrixGame([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])


def matching_pennies() -> MatrixGame:
    return MatrixGame([[1, -1], [-1, 1]])


def load_matrix(path) -> MatrixGame:
    """Read a matrix from a whitespace/comma separated text file."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            rows.append([float(p) for p in parts])
    if not rows:
        raise ValueError(f"no matrix rows found in {path}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"ragged matrix rows in {path}")
    return MatrixGame(rows)
