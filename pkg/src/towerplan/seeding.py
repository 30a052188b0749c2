"""Deterministic seed derivation for nested rng streams.

Every stochastic component (trial, probe, episode) gets its own seed derived
from a tuple of identifying parts, so outcomes do not depend on the order in
which sibling computations run. The mix is pure 64-bit integer arithmetic and
therefore stable across platforms and Python builds.
"""

from __future__ import annotations

import zlib

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    # splitmix64 finalizer
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def fold_parts(*parts: int | str) -> int:
    """Fold parts into the raw 64-bit mix state (see derive_seed)."""
    h = _GOLDEN
    for p in parts:
        if isinstance(p, str):
            p = zlib.crc32(p.encode("utf-8"))
        elif not isinstance(p, int):
            raise TypeError(f"seed parts must be int or str, got {type(p).__name__}")
        h = _mix64((h + p) & _MASK64)
    return h


def fold_one(state: int, part: int) -> int:
    """Fold one more integer part into a fold_parts state."""
    return _mix64((state + part) & _MASK64)


def derive_seed(*parts: int | str) -> int:
    """Fold parts (ints and short strings) into a stable 63-bit seed."""
    return fold_parts(*parts) >> 1
