"""Compiled per-trial kernels.

Edges are never materialized: each step of a walk hashes the edge index it
needs.  The horizontal verdict comes from a boundary walk (see
:func:`hull_crossing`) that only visits the hull of the clusters touching
the left side; the full union-find kernel is kept for four-sided verdicts
and as a cross-check.
"""
import numpy as np

from .._accel import njit
from .rng import EDGE_STEP, TRIAL_STEP

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TSTEP = np.uint64(TRIAL_STEP)
_ESTEP = np.uint64(EDGE_STEP)

QUANTITY_H = 0
QUANTITY_HV = 1
QUANTITY_V = 2


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def trial_key(seed, trial):
    return mix64(np.uint64(seed) + np.uint64(trial + 1) * _TSTEP)


@njit(cache=True, inline="always")
def edge_is_open(key, e, thr):
    return (mix64(key + np.uint64(e + 1) * _ESTEP) >> _S11) < thr


@njit(cache=True, inline="always")
def _step_open(L, Lp, thr, key, x, y, d, transpose):
    """Whether the walker at ``(x, y)`` may step in direction ``d`` (E, N, W, S = 0..3).

    Walk coordinates equal lattice coordinates unless ``transpose``, in which
    case walk ``(x, y)`` is lattice ``(y, x)``.  Walk column 0 is wired.
    """
    W = Lp if transpose else L
    H = L if transpose else Lp
    if d == 0:
        if x >= W - 1:
            return False
    elif d == 2:
        if x <= 0:
            return False
    elif d == 1:
        if y >= H - 1:
            return False
        if x == 0:
            return True
    else:
        if y <= 0:
            return False
        if x == 0:
            return True
    # lattice site and lattice direction of the edge
    if transpose:
        lx, ly = y, x
        ld = (1, 0, 3, 2)[d]
    else:
        lx, ly = x, y
        ld = d
    nh = (L - 1) * Lp
    if ld == 0:
        e = ly * (L - 1) + lx
    elif ld == 2:
        e = ly * (L - 1) + lx - 1
    elif ld == 1:
        e = nh + ly * L + lx
    else:
        e = nh + (ly - 1) * L + lx
    return edge_is_open(key, e, thr)


@njit(cache=True)
def hull_crossing(L, Lp, thr, key, transpose):
    """Left-right crossing (bottom-top if ``transpose``) by a right-hand boundary walk.

    The left column is treated as wired.  The walker starts at the bottom
    left heading east and keeps its right hand on the wall.  It reaches the
    right column iff the cluster of the wired column spans; otherwise it
    returns to the start heading south after tracing the whole hull.
    """
    W = Lp if transpose else L
    x = 0
    y = 0
    d = 0
    while True:
        nd = (d + 3) & 3
        for _ in range(4):
            if _step_open(L, Lp, thr, key, x, y, nd, transpose):
                break
            nd = (nd + 1) & 3
        if nd == 0:
            x += 1
        elif nd == 1:
            y += 1
        elif nd == 2:
            x -= 1
        else:
            y -= 1
        d = nd
        if x == W - 1:
            return True
        if x == 0 and y == 0 and d == 3:
            return False


@njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def uf_verdicts(L, Lp, thr, key, parent, rank, mask):
    """``(horizontal, vertical, four_sided)`` by union-find with side masks.

    ``parent``, ``rank`` and ``mask`` are scratch arrays of length ``L*Lp``.
    """
    n = L * Lp
    for i in range(n):
        parent[i] = i
        rank[i] = 0
        mask[i] = 0
    nh = (L - 1) * Lp
    for y in range(Lp):
        for x in range(L - 1):
            if edge_is_open(key, y * (L - 1) + x, thr):
                a = _find(parent, y * L + x)
                b = _find(parent, y * L + x + 1)
                if a != b:
                    if rank[a] < rank[b]:
                        a, b = b, a
                    parent[b] = a
                    if rank[a] == rank[b]:
                        rank[a] += 1
    for y in range(Lp - 1):
        for x in range(L):
            if edge_is_open(key, nh + y * L + x, thr):
                a = _find(parent, y * L + x)
                b = _find(parent, (y + 1) * L + x)
                if a != b:
                    if rank[a] < rank[b]:
                        a, b = b, a
                    parent[b] = a
                    if rank[a] == rank[b]:
                        rank[a] += 1
    for y in range(Lp):
        r = _find(parent, y * L)
        mask[r] |= 1
        r = _find(parent, y * L + L - 1)
        mask[r] |= 2
    for x in range(L):
        r = _find(parent, x)
        mask[r] |= 4
        r = _find(parent, (Lp - 1) * L + x)
        mask[r] |= 8
    h = False
    v = False
    hv = False
    for i in range(n):
        m = mask[i]
        if m & 3 == 3:
            h = True
        if m & 12 == 12:
            v = True
        if m == 15:
            hv = True
    return h, v, hv


@njit(cache=True, nogil=True)
def count_chunk(L, Lp, thr, seed, t0, t1, quantity):
    """Number of successes among trials ``t0 .. t1-1``."""
    s = 0
    for t in range(t0, t1):
        key = trial_key(seed, t)
        if quantity == QUANTITY_H:
            s += hull_crossing(L, Lp, thr, key, False)
        elif quantity == QUANTITY_V:
            s += hull_crossing(L, Lp, thr, key, True)
        else:
            # a left-right and a bottom-top open path must share a site, so
            # the four-sided event is exactly the conjunction
            if hull_crossing(L, Lp, thr, key, False):
                s += hull_crossing(L, Lp, thr, key, True)
    return s


@njit(cache=True, nogil=True)
def count_chunk_uf(L, Lp, thr, seed, t0, t1, quantity):
    """Same as :func:`count_chunk` but every verdict from full union-find."""
    n = L * Lp
    parent = np.empty(n, np.int64)
    rank = np.empty(n, np.int8)
    mask = np.empty(n, np.int8)
    s = 0
    for t in range(t0, t1):
        key = trial_key(seed, t)
        h, v, hv = uf_verdicts(L, Lp, thr, key, parent, rank, mask)
        if quantity == QUANTITY_H:
            s += h
        elif quantity == QUANTITY_V:
            s += v
        else:
            s += hv
    return s


@njit(cache=True)
def trial_verdicts(L, Lp, thr, seed, trials):
    """Per-trial ``(hull_h, hull_v, uf_h, uf_v, uf_hv)`` rows, for testing."""
    n = L * Lp
    parent = np.empty(n, np.int64)
    rank = np.empty(n, np.int8)
    mask = np.empty(n, np.int8)
    out = np.zeros((trials, 5), np.bool_)
    for t in range(trials):
        key = trial_key(seed, t)
        out[t, 0] = hull_crossing(L, Lp, thr, key, False)
        out[t, 1] = hull_crossing(L, Lp, thr, key, True)
        h, v, hv = uf_verdicts(L, Lp, thr, key, parent, rank, mask)
        out[t, 2] = h
        out[t, 3] = v
        out[t, 4] = hv
    return out
