"""Counter-based deterministic randomness for environment events.

Every stochastic decision in the game is resolved by hashing the tuple
(seed, step, event kind, actor ids...). The same seed and action sequence
therefore reproduce the same episode bit-for-bit, no matter how many
environment instances run in parallel or in which order they are stepped.
"""

from __future__ import annotations

import hashlib

_SCALE = float(2**64)


def event_roll(seed: int, step: int, kind: str, *ids: int) -> float:
    """Return a deterministic uniform draw in [0, 1) for one event."""
    key = f"{seed}|{step}|{kind}|" + ",".join(str(i) for i in ids)
    digest = hashlib.blake2b(key.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big") / _SCALE
