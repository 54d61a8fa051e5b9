import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprob import _accel
from crossprob.percolation import (
    BondConfig,
    LatticeSpec,
    UnionFind,
    crossing_verdicts,
    dual_complement,
    estimate,
    has_horizontal_crossing,
    has_vertical_crossing,
    sample_config,
)
from crossprob.percolation import _fallback, rng

import oracles

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba unavailable or disabled")

SHAPES = [(2, 2), (3, 3), (2, 4), (4, 3), (5, 7), (9, 4), (16, 17)]


# --- rng -----------------------------------------------------------------------


def test_splitmix_reference_values():
    # SplitMix64 stream from seed 0: state advances by the golden gamma
    state = 0
    out = []
    for _ in range(3):
        state = (state + rng.TRIAL_STEP) & (2 ** 64 - 1)
        out.append(rng.mix64(state))
    assert out == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_mix64_array_matches_scalar():
    xs = [0, 1, 2 ** 63, 2 ** 64 - 1, 123456789]
    arr = rng.mix64(np.array(xs, dtype=np.uint64))
    assert [int(v) for v in arr] == [rng.mix64(x) for x in xs]


def test_threshold_extremes():
    key = rng.trial_key(7, 3)
    assert not rng.edge_open(key, 100, rng.open_threshold(0.0)).any()
    assert rng.edge_open(key, 100, rng.open_threshold(1.0)).all()


def test_edge_bits_are_balanced():
    bits = np.concatenate([rng.edge_open(rng.trial_key(1, t), 1000, rng.open_threshold(0.5)) for t in range(100)])
    # 1e5 fair coins: 5 sigma is about 0.008
    assert abs(bits.mean() - 0.5) < 0.008


def test_trials_are_independent_of_each_other():
    a = sample_config(LatticeSpec(8, 8, 0.5, 3), 10)
    b = sample_config(LatticeSpec(8, 8, 0.5, 3), 10)
    c = sample_config(LatticeSpec(8, 8, 0.5, 3), 11)
    assert a == b and a != c


# --- lattice -------------------------------------------------------------------


def test_spec_geometry():
    s = LatticeSpec(5, 3)
    assert (s.n_sites, s.n_horizontal, s.n_vertical, s.n_edges) == (15, 12, 10, 22)
    assert s.r == 2.0
    assert LatticeSpec.for_ratio(257, 2.0).Lp == 129
    with pytest.raises(ValueError):
        LatticeSpec(1, 4)
    with pytest.raises(ValueError):
        LatticeSpec(4, 4, p=1.5)


def test_edge_order_matches_oracle():
    L, Lp = 4, 3
    for e, (a, b) in enumerate(oracles.lattice_edges(L, Lp)):
        bits = np.zeros(LatticeSpec(L, Lp).n_edges, bool)
        bits[e] = True
        cfg = BondConfig.from_edges(L, Lp, bits)
        uf = UnionFind(L * Lp)
        for y, x in zip(*np.nonzero(cfg.horizontal)):
            uf.union(y * L + x, y * L + x + 1)
        for y, x in zip(*np.nonzero(cfg.vertical)):
            uf.union(y * L + x, (y + 1) * L + x)
        assert uf.connected(a, b)


def test_dual_shape_and_edge_counts():
    cfg = sample_config(LatticeSpec(6, 4, 0.5, 1), 0)
    d = cfg.dual()
    assert (d.L, d.Lp) == (5, 5)
    # every primal edge except the boundary columns is crossed by one dual edge
    closed_h = (~cfg.horizontal).sum()
    closed_inner_v = (~cfg.vertical[:, 1:-1]).sum()
    assert d.n_open == closed_h + closed_inner_v


def test_transpose_swaps_crossings():
    for t in range(50):
        cfg = sample_config(LatticeSpec(5, 7, 0.5, 9), t)
        assert has_vertical_crossing(cfg) == has_horizontal_crossing(cfg.transpose())


# --- verdicts against brute force --------------------------------------------------


@pytest.mark.parametrize("L,Lp", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_union_find_against_bfs_exhaustive(L, Lp):
    n = LatticeSpec(L, Lp).n_edges
    for bits in itertools.product((False, True), repeat=n):
        cfg = BondConfig.from_edges(L, Lp, np.array(bits))
        assert crossing_verdicts(cfg) == oracles.bfs_crossings(L, Lp, bits)


@pytest.mark.parametrize("L,Lp", SHAPES)
@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_fallback_against_bfs(L, Lp, p):
    spec = LatticeSpec(L, Lp, p, 42)
    for t in range(40):
        cfg = sample_config(spec, t)
        got = _fallback.trial_verdicts(L, Lp, spec.threshold, rng.trial_key(spec.seed, t))
        assert tuple(bool(x) for x in got) == oracles.bfs_crossings(L, Lp, cfg.edges())


@needs_numba
@pytest.mark.parametrize("L,Lp", SHAPES)
@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_kernels_against_bfs(L, Lp, p):
    from crossprob.percolation import _kernels

    spec = LatticeSpec(L, Lp, p, 42)
    rows = _kernels.trial_verdicts(L, Lp, np.uint64(spec.threshold), spec.seed, 60)
    for t, row in enumerate(rows):
        h, v, hv = oracles.bfs_crossings(L, Lp, sample_config(spec, t).edges())
        assert (row[0], row[1], row[2], row[3], row[4]) == (h, v, h, v, hv)


@needs_numba
def test_hv_is_conjunction_of_h_and_v():
    from crossprob.percolation import _kernels

    spec = LatticeSpec(12, 9, 0.5, 5)
    rows = _kernels.trial_verdicts(12, 9, np.uint64(spec.threshold), 5, 2000)
    assert np.array_equal(rows[:, 4], rows[:, 2] & rows[:, 3])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(2, 12), st.integers(0, 2 ** 64 - 1), st.integers(0, 10 ** 6))
def test_dual_complement_property(L, Lp, seed, trial):
    assert dual_complement(sample_config(LatticeSpec(L, Lp, 0.5, seed), trial))


def test_dual_complement_at_any_p():
    # the law is about one configuration, so it holds for every p
    for p in (0.1, 0.45, 0.9):
        spec = LatticeSpec(7, 5, p, 11)
        assert all(dual_complement(sample_config(spec, t)) for t in range(200))


# --- estimates -------------------------------------------------------------------


@pytest.mark.parametrize("quantity", ["horizontal", "vertical", "horizontal_and_vertical"])
def test_backends_and_threads_agree(quantity):
    spec = LatticeSpec(12, 9, 0.5, 77)
    backends = ["numpy"] + (["numba", "numba_uf"] if _accel.HAVE_NUMBA else [])
    counts = {
        (b, th): estimate(spec, quantity, 5000, th, backend=b).successes
        for b in backends for th in (1, 3)
    }
    assert len(set(counts.values())) == 1


def test_exact_probability_within_4_sigma():
    L, Lp, p = 3, 3, 0.5
    # exact duality: P_h on 3x3 at p plus P_h on the 4x2 dual pair at 1-p is 1
    for q in (0.3, 0.5):
        dual = LatticeSpec(L, Lp, q).dual_pair()
        s = oracles.exact_crossing_probability(L, Lp, q, 0) + oracles.exact_crossing_probability(dual.L, dual.Lp, dual.p, 0)
        assert s == pytest.approx(1.0, abs=1e-12)
    for p in (0.3, 0.6):
        exact = oracles.exact_crossing_probability(L, Lp, p, 0)
        est = estimate(LatticeSpec(L, Lp, p, 1), "horizontal", 20_000)
        sigma = (exact * (1 - exact) / est.trials) ** 0.5
        assert abs(est.p_hat - exact) < 4 * sigma


def test_estimate_extremes_and_json():
    spec = LatticeSpec(6, 6, 1.0)
    e = estimate(spec, "hv", 100)
    assert e.p_hat == 1.0 and e.stderr == 0.0
    assert '"successes": 100' in e.to_json()
    assert estimate(LatticeSpec(6, 6, 0.0), "h", 100).successes == 0


def test_estimate_rejects_bad_arguments():
    spec = LatticeSpec(4, 4)
    with pytest.raises(ValueError):
        estimate(spec, "diagonal", 10)
    with pytest.raises(ValueError):
        estimate(spec, "h", 0)
    with pytest.raises(ValueError):
        estimate(spec, "h", 10, threads=0)
    with pytest.raises(ValueError):
        estimate(spec, "h", 10, backend="gpu")


def test_trivial_configurations():
    for L, Lp in ((2, 2), (5, 3), (16, 17)):
        full = sample_config(LatticeSpec(L, Lp, 1.0), 0)
        empty = sample_config(LatticeSpec(L, Lp, 0.0), 0)
        assert full == BondConfig.full(L, Lp) and empty == BondConfig.empty(L, Lp)
        assert crossing_verdicts(full) == (True, True, True)
        assert crossing_verdicts(empty) == (False, False, False)
        if L >= 3:
            assert dual_complement(full) and dual_complement(empty)
