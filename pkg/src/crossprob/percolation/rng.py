"""Counter-based random bits keyed by ``(seed, trial, edge)``.

Every edge of every trial gets its own 64-bit word from the SplitMix64
finalizer, so any trial can be regenerated on its own and the results do
not depend on how trials are split across threads.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["TRIAL_STEP", "EDGE_STEP", "mix64", "open_threshold", "trial_key", "edge_words", "edge_open"]

TRIAL_STEP = 0x9E3779B97F4A7C15
EDGE_STEP = 0xD1B54A32D192ED03
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z):
    """SplitMix64 finalizer on a Python int or a ``uint64`` array."""
    if isinstance(z, np.ndarray):
        z = z.astype(np.uint64, copy=True)
        z ^= z >> np.uint64(30)
        z *= np.uint64(_M1)
        z ^= z >> np.uint64(27)
        z *= np.uint64(_M2)
        z ^= z >> np.uint64(31)
        return z
    z = int(z) & _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def open_threshold(p: float) -> int:
    """Edges are open when ``word >> 11 < open_threshold(p)``; p=0 and p=1 are exact."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return int(math.ceil(p * 2.0 ** 53))


def trial_key(seed: int, trial: int) -> int:
    return mix64((int(seed) + (int(trial) + 1) * TRIAL_STEP) & _MASK)


def edge_words(key: int, n_edges: int) -> np.ndarray:
    e = np.arange(1, n_edges + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key) + e * np.uint64(EDGE_STEP))


def edge_open(key: int, n_edges: int, threshold: int) -> np.ndarray:
    """Boolean occupancy for edges ``0 .. n_edges-1``."""
    return (edge_words(key, n_edges) >> np.uint64(11)) < np.uint64(threshold)
