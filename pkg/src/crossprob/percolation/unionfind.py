"""Disjoint sets and crossing verdicts for single configurations.

This is the reference implementation used to check the compiled kernels;
it favors clarity over speed.
"""
from __future__ import annotations

import numpy as np

from .lattice import BondConfig

__all__ = [
    "UnionFind",
    "crossing_verdicts",
    "dual_complement",
    "has_horizontal_crossing",
    "has_hv_crossing",
    "has_vertical_crossing",
]

LEFT, RIGHT, BOTTOM, TOP = range(4)


class UnionFind:
    """Path halving plus union by rank over ``n`` sites and four virtual terminals.

    The terminals ``left``, ``right``, ``bottom`` and ``top`` are nodes
    ``n .. n+3``.  Attach only the pair belonging to one axis at a time:
    joining terminals of both axes would merge unrelated clusters.
    """

    def __init__(self, n: int):
        self.n = n
        self.parent = np.arange(n + 4, dtype=np.int64)
        self.rank = np.zeros(n + 4, dtype=np.int8)

    def terminal(self, side: int) -> int:
        return self.n + side

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return int(a)

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def _site_union(config: BondConfig) -> UnionFind:
    L, Lp = config.L, config.Lp
    uf = UnionFind(L * Lp)
    ys, xs = np.nonzero(config.horizontal)
    for x, y in zip(xs.tolist(), ys.tolist()):
        uf.union(y * L + x, y * L + x + 1)
    ys, xs = np.nonzero(config.vertical)
    for x, y in zip(xs.tolist(), ys.tolist()):
        uf.union(y * L + x, (y + 1) * L + x)
    return uf


def _side_sites(L: int, Lp: int):
    return {
        LEFT: [y * L for y in range(Lp)],
        RIGHT: [y * L + L - 1 for y in range(Lp)],
        BOTTOM: list(range(L)),
        TOP: [(Lp - 1) * L + x for x in range(L)],
    }


def _axis_crossing(config: BondConfig, a: int, b: int) -> bool:
    uf = _site_union(config)
    sides = _side_sites(config.L, config.Lp)
    for side in (a, b):
        t = uf.terminal(side)
        for s in sides[side]:
            uf.union(t, s)
    return uf.connected(uf.terminal(a), uf.terminal(b))


def has_horizontal_crossing(config: BondConfig) -> bool:
    """An open path from the left column to the right column."""
    return _axis_crossing(config, LEFT, RIGHT)


def has_vertical_crossing(config: BondConfig) -> bool:
    return _axis_crossing(config, BOTTOM, TOP)


def crossing_verdicts(config: BondConfig) -> tuple[bool, bool, bool]:
    """``(horizontal, vertical, four_sided)`` from one pass with side masks per cluster."""
    uf = _site_union(config)
    masks: dict[int, int] = {}
    for side, sites in _side_sites(config.L, config.Lp).items():
        for s in sites:
            root = uf.find(s)
            masks[root] = masks.get(root, 0) | (1 << side)
    lr = (1 << LEFT) | (1 << RIGHT)
    bt = (1 << BOTTOM) | (1 << TOP)
    h = any(m & lr == lr for m in masks.values())
    v = any(m & bt == bt for m in masks.values())
    hv = any(m == 15 for m in masks.values())
    return h, v, hv


def has_hv_crossing(config: BondConfig) -> bool:
    """A single cluster touching all four sides."""
    return crossing_verdicts(config)[2]


def dual_complement(config: BondConfig) -> bool:
    """Whether exactly one of (primal horizontal, dual vertical) crossing occurs."""
    return has_horizontal_crossing(config) != has_vertical_crossing(config.dual())
