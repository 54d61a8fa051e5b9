"""Monte Carlo crossing frequencies."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from .. import _accel
from .lattice import LatticeSpec

__all__ = ["CHUNK", "QUANTITIES", "CrossingEstimate", "estimate"]

# trials per work item; fixed so the partition of trials never depends on threads
CHUNK = 2048

QUANTITIES = {"horizontal": 0, "horizontal_and_vertical": 1, "vertical": 2}
_ALIASES = {"h": "horizontal", "hv": "horizontal_and_vertical", "v": "vertical"}


def _quantity(q: str) -> str:
    q = _ALIASES.get(q, q)
    if q not in QUANTITIES:
        raise ValueError(f"unknown quantity {q!r}; expected one of {sorted(QUANTITIES)}")
    return q


def _counter(backend: str | None):
    backend = backend or _accel.backend()
    if backend == "numba":
        if not _accel.HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        from ._kernels import count_chunk
    elif backend == "numba_uf":
        from ._kernels import count_chunk_uf as count_chunk
    elif backend == "numpy":
        from ._fallback import count_chunk
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return count_chunk


@dataclass(frozen=True)
class CrossingEstimate:
    quantity: str
    L: int
    Lp: int
    r: float
    p: float
    trials: int
    successes: int
    p_hat: float
    stderr: float
    seed: int

    @classmethod
    def from_counts(cls, spec: LatticeSpec, quantity: str, trials: int, successes: int) -> "CrossingEstimate":
        p_hat = successes / trials
        return cls(
            quantity=quantity,
            L=spec.L,
            Lp=spec.Lp,
            r=spec.r,
            p=spec.p,
            trials=trials,
            successes=successes,
            p_hat=p_hat,
            stderr=math.sqrt(p_hat * (1 - p_hat) / trials),
            seed=int(spec.seed),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def estimate(spec: LatticeSpec, quantity: str = "horizontal", trials: int = 10_000,
             threads: int = 1, backend: str | None = None) -> CrossingEstimate:
    """Frequency of a crossing event over ``trials`` independent configurations.

    Trial ``t`` always sees the configuration keyed by ``(spec.seed, t)``,
    and trials are grouped in fixed chunks of :data:`CHUNK`, so the count is
    identical for every ``threads`` value and every backend.
    """
    quantity = _quantity(quantity)
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer")
    if int(threads) != threads or threads < 1:
        raise ValueError("threads must be a positive integer")
    count = _counter(backend)
    code = QUANTITIES[quantity]
    bounds = [(t0, min(t0 + CHUNK, trials)) for t0 in range(0, trials, CHUNK)]
    args = (spec.L, spec.Lp, _threshold(spec), int(spec.seed))

    def run(b):
        return int(count(*args, b[0], b[1], code))

    if threads == 1 or len(bounds) == 1:
        successes = sum(map(run, bounds))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            successes = sum(pool.map(run, bounds))
    return CrossingEstimate.from_counts(spec, quantity, int(trials), successes)


def _threshold(spec: LatticeSpec):
    import numpy as np

    return np.uint64(spec.threshold)
