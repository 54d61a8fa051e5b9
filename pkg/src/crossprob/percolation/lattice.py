"""Rectangular bond-percolation lattices, configurations and their duals.

Sites are ``(x, y)`` with ``0 <= x < L`` and ``0 <= y < Lp``; site index is
``y*L + x``.  Edge indices put the ``(L-1)*Lp`` horizontal edges first
(``y*(L-1) + x`` joins ``(x, y)`` and ``(x+1, y)``) and then the vertical
ones (``nh + y*L + x`` joins ``(x, y)`` and ``(x, y+1)``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng

__all__ = ["BondConfig", "LatticeSpec", "sample_config"]


@dataclass(frozen=True)
class LatticeSpec:
    """An ``L x Lp`` site grid with bond probability ``p`` and a 64-bit seed.

    The aspect ratio is measured in bond lengths, ``r = (L-1)/(Lp-1)``.
    """

    L: int
    Lp: int
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if int(self.L) != self.L or int(self.Lp) != self.Lp or self.L < 2 or self.Lp < 2:
            raise ValueError(f"lattice needs integer L, Lp >= 2, got {self.L} x {self.Lp}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def for_ratio(cls, L: int, r: float, p: float = 0.5, seed: int = 0) -> "LatticeSpec":
        """Width ``L`` and the height whose bond-length ratio is closest to ``r``."""
        Lp = max(2, int(round((L - 1) / r)) + 1)
        return cls(L, Lp, p, seed)

    @property
    def r(self) -> float:
        return (self.L - 1) / (self.Lp - 1)

    @property
    def n_sites(self) -> int:
        return self.L * self.Lp

    @property
    def n_horizontal(self) -> int:
        return (self.L - 1) * self.Lp

    @property
    def n_vertical(self) -> int:
        return self.L * (self.Lp - 1)

    @property
    def n_edges(self) -> int:
        return self.n_horizontal + self.n_vertical

    @property
    def threshold(self) -> int:
        return rng.open_threshold(self.p)

    def dual_pair(self) -> "LatticeSpec":
        """The ``(Lp+1) x (L-1)`` lattice whose horizontal crossing is the complement event at p=1/2.

        The dual of this lattice is ``(L-1) x (Lp+1)``; rotating it by a
        quarter turn turns its vertical crossings into horizontal ones.
        """
        if self.L < 3:
            raise ValueError("dual pair needs L >= 3")
        return LatticeSpec(self.Lp + 1, self.L - 1, 1.0 - self.p, self.seed)


@dataclass(frozen=True, eq=False)
class BondConfig:
    """Edge occupancy of an ``L x Lp`` grid.

    ``horizontal[y, x]`` is the edge ``(x, y)-(x+1, y)``, shape ``(Lp, L-1)``;
    ``vertical[y, x]`` is the edge ``(x, y)-(x, y+1)``, shape ``(Lp-1, L)``.
    Width 1 is allowed so that duals of width-2 lattices are representable.
    """

    L: int
    Lp: int
    horizontal: np.ndarray
    vertical: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.horizontal, dtype=bool)
        v = np.asarray(self.vertical, dtype=bool)
        if h.shape != (self.Lp, self.L - 1) or v.shape != (self.Lp - 1, self.L):
            raise ValueError(
                f"edge arrays {h.shape}, {v.shape} do not fit a {self.L} x {self.Lp} grid"
            )
        h.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "horizontal", h)
        object.__setattr__(self, "vertical", v)

    @classmethod
    def full(cls, L: int, Lp: int) -> "BondConfig":
        return cls(L, Lp, np.ones((Lp, L - 1), bool), np.ones((Lp - 1, L), bool))

    @classmethod
    def empty(cls, L: int, Lp: int) -> "BondConfig":
        return cls(L, Lp, np.zeros((Lp, L - 1), bool), np.zeros((Lp - 1, L), bool))

    @classmethod
    def from_edges(cls, L: int, Lp: int, is_open: np.ndarray) -> "BondConfig":
        """From a flat occupancy vector in edge-index order."""
        is_open = np.asarray(is_open, dtype=bool)
        nh = (L - 1) * Lp
        if is_open.shape != (nh + L * (Lp - 1),):
            raise ValueError("edge vector has the wrong length")
        return cls(L, Lp, is_open[:nh].reshape(Lp, L - 1), is_open[nh:].reshape(Lp - 1, L))

    def edges(self) -> np.ndarray:
        return np.concatenate([self.horizontal.ravel(), self.vertical.ravel()])

    @property
    def n_edges(self) -> int:
        return self.horizontal.size + self.vertical.size

    @property
    def n_open(self) -> int:
        return int(self.horizontal.sum() + self.vertical.sum())

    def __eq__(self, other):
        if not isinstance(other, BondConfig):
            return NotImplemented
        return (
            (self.L, self.Lp) == (other.L, other.Lp)
            and np.array_equal(self.horizontal, other.horizontal)
            and np.array_equal(self.vertical, other.vertical)
        )

    def dual(self) -> "BondConfig":
        """The dual configuration on the ``(L-1) x (Lp+1)`` grid of face centers.

        Dual site ``(i, j)`` sits at ``(i + 1/2, j - 1/2)``.  A dual edge is
        open iff the primal edge it crosses is closed.  The horizontal dual
        edges in the outer rows ``j = 0`` and ``j = Lp`` cross nothing and
        stay closed.
        """
        L, Lp = self.L, self.Lp
        dv = ~self.horizontal
        dh = np.zeros((Lp + 1, L - 2), bool)
        dh[1:Lp, :] = ~self.vertical[:, 1 : L - 1]
        return BondConfig(L - 1, Lp + 1, dh, dv)

    def transpose(self) -> "BondConfig":
        """Reflect in the diagonal, so vertical crossings become horizontal ones."""
        return BondConfig(self.Lp, self.L, self.vertical.T, self.horizontal.T)


def sample_config(spec: LatticeSpec, trial: int) -> BondConfig:
    """The configuration of trial ``trial``; identical to what the kernels see."""
    key = rng.trial_key(spec.seed, trial)
    return BondConfig.from_edges(spec.L, spec.Lp, rng.edge_open(key, spec.n_edges, spec.threshold))
