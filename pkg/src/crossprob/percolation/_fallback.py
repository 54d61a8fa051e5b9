"""Pure numpy/scipy implementation of the trial counters.

Used when numba is unavailable or disabled.  Each trial samples every edge
with the vectorized hash and labels clusters with
``scipy.sparse.csgraph.connected_components``.
"""
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import rng

QUANTITY_H = 0
QUANTITY_HV = 1
QUANTITY_V = 2


class _Geometry:
    """Endpoint arrays of every edge, cached per lattice shape."""

    _cache: dict = {}

    def __new__(cls, L, Lp):
        key = (L, Lp)
        if key not in cls._cache:
            self = super().__new__(cls)
            y, x = np.mgrid[0:Lp, 0 : L - 1]
            h_a = (y * L + x).ravel()
            y, x = np.mgrid[0 : Lp - 1, 0:L]
            v_a = (y * L + x).ravel()
            self.a = np.concatenate([h_a, v_a])
            self.b = np.concatenate([h_a + 1, v_a + L])
            self.n = L * Lp
            idx = np.arange(self.n).reshape(Lp, L)
            self.left, self.right = idx[:, 0], idx[:, -1]
            self.bottom, self.top = idx[0, :], idx[-1, :]
            cls._cache[key] = self
        return cls._cache[key]


def trial_verdicts(L, Lp, thr, key):
    """``(horizontal, vertical, four_sided)`` for one trial."""
    g = _Geometry(L, Lp)
    is_open = rng.edge_open(key, len(g.a), thr)
    a, b = g.a[is_open], g.b[is_open]
    adj = coo_matrix((np.ones(len(a), np.int8), (a, b)), shape=(g.n, g.n))
    _, labels = connected_components(adj, directed=False)
    sides = [np.unique(labels[s]) for s in (g.left, g.right, g.bottom, g.top)]
    lr = np.intersect1d(sides[0], sides[1], assume_unique=True)
    bt = np.intersect1d(sides[2], sides[3], assume_unique=True)
    hv = np.intersect1d(lr, bt, assume_unique=True)
    return len(lr) > 0, len(bt) > 0, len(hv) > 0


def count_chunk(L, Lp, thr, seed, t0, t1, quantity):
    col = {QUANTITY_H: 0, QUANTITY_V: 1, QUANTITY_HV: 2}[quantity]
    s = 0
    for t in range(t0, t1):
        s += trial_verdicts(L, Lp, thr, rng.trial_key(seed, t))[col]
    return s
