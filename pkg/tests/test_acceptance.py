"""Acceptance gate: one check per primary criterion, each printing a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import json
import math
import os
import sys
import time
from fractions import Fraction

import pytest

from crossprob import cli
from crossprob import crossing as cx
from crossprob import modeval
from crossprob import qseries as qs
from crossprob.percolation import LatticeSpec, dual_complement, estimate, sample_config

sys.path.insert(0, os.path.dirname(__file__))
import oracles  # noqa: E402

R_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, 4.0)
ROUTE_GRID = (0.5, 1.0, 1.5, 2.0, 4.0)

# (name, passed, detail) in execution order; printed by conftest's summary hook
RESULTS: list[tuple[str, bool, str]] = []


def _record(name: str, passed: bool, detail: str):
    RESULTS.append((name, passed, detail))
    print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return passed


def _cli_json(argv):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, json.loads(buf.getvalue())


# --- criteria --------------------------------------------------------------------


def check_exact_coefficients():
    t0 = time.perf_counter()
    _, fw = _cli_json(["series", "fW", "--order", "6"])
    _, lam = _cli_json(["series", "lambda"])
    _, lp = _cli_json(["series", "lambda_prime"])
    got_fw = [Fraction(c) for c in fw["coeffs"] if Fraction(c) != 0]
    want_fw = [Fraction(1, 5), Fraction(16, 55), Fraction(364, 935), Fraction(13568, 21505), Fraction(91614, 124729)]
    ok = (
        got_fw == want_fw
        and [Fraction(c) for c in lam["coeffs"][:3]] == [16, -128, 704]
        and [Fraction(c) for c in lp["coeffs"][:3]] == [8, -128, 1056]
    )
    dt = time.perf_counter() - t0
    return _record("exact coefficients", ok and dt < 1.0, f"fW={[str(c) for c in got_fw]} runtime={dt:.2f}s")


def check_f2_decomposition():
    t0 = time.perf_counter()
    f2 = qs.qexp_f("f2", 64)
    fw = qs.qexp_f("fW", 64)
    t4 = qs.qexp_theta(2, 65) ** 4
    zero = (f2 + 16 * fw - t4.scale(Fraction(1, 16))).truncate(64).is_zero()
    dt = time.perf_counter() - t0
    return _record("f2 + 16 fW - theta2^4/16 = 0 to order 64", zero and dt < 5.0, f"exact zero={zero} runtime={dt:.2f}s")


def check_three_routes():
    worst = 0.0
    for fn in (cx.cardy_pih, cx.watts_pihvbar):
        for r in ROUTE_GRID:
            vals = [fn(r, m).value for m in cx.METHODS]
            worst = max(worst, max(vals) - min(vals))
    return _record("three-route agreement", worst < 1e-8, f"max pairwise diff {worst:.2e} (tol 1e-8)")


def check_functional_equations():
    dh = dv = d1 = 0.0
    for m in cx.METHODS:
        for r in R_GRID:
            dh = max(dh, abs(cx.cardy_pih(r, m).value + cx.cardy_pih(1 / r, m).value - 1))
            dv = max(dv, abs(cx.pihv(r, m).value - cx.pihv(1 / r, m).value))
        d1 = max(d1, abs(cx.cardy_pih(1.0, m).value - 0.5))
    ok = dh < 1e-10 and dv < 1e-9 and d1 < 1e-10
    return _record("functional equations", ok, f"h-duality {dh:.1e}, hv-symmetry {dv:.1e}, Pi_h(1)-1/2 {d1:.1e}")


def check_sle_family():
    cardy = max(abs(cx.sle_crossing(lam, 6, m) - oracles.cardy_mp(lam))
                for lam in (0.05, 0.2, 0.5, 0.8, 0.95) for m in ("hyp", "integral"))
    at_one = max(abs(cx.sle_crossing(1.0, k, m) - 1) for k in (4.5, 6, 8) for m in ("hyp", "integral"))
    duality = max(abs(cx.sle_crossing(lam, k) + cx.sle_crossing(1 - lam, k) - 1)
                  for k in (4.5, 5, 6, 7, 8) for lam in (0.1, 0.3, 0.5, 0.7))
    ok = cardy < 1e-10 and at_one < 1e-12 and duality < 1e-10
    return _record("SLE family", ok, f"vs Cardy {cardy:.1e}, F(1) {at_one:.1e}, duality {duality:.1e}")


def check_generalized_family():
    classical = 0.0
    for r in (0.5, 1.0, 1.5, 2.0):
        for m in ("eta_integral", "lambda_integral"):
            classical = max(classical,
                            abs(cx.piminus(r, 1 / 3, 1, m).value - cx.pihv(r).value),
                            abs(cx.pi2(r, 1 / 3, 1, m).value - cx.watts_pihvbar(r).value))
    general = 0.0
    for r in (1.3, 2.0):
        for m in ("eta_integral", "lambda_integral"):
            general = max(general,
                          abs(cx.piminus(r, 0.25, 0.75, m).value - cx.piminus(1 / r, 0.25, 0.75, m).value),
                          abs(cx.piminus(r, 0.25, 0.75, m).value + cx.pi2(r, 0.25, 0.75, m).value
                              - cx.pih_alpha(r, 0.25).value))
    pre = abs(cx.pihvbar_beta1_prefactor(1 / 3) - math.sqrt(3) / (2 * math.pi))
    ok = classical < 1e-8 and general < 1e-8 and pre < 1e-12
    return _record("generalized crossing family", ok,
                   f"(1/3,1) {classical:.1e}, (1/4,3/4) {general:.1e}, prefactor {pre:.1e}")


def check_modularity():
    taus = (1j, 1.2j, 0.8j, 1.5j, 0.4 + 1.3j)
    res = max(modeval.check_transformation(k, t) for t in taus for k in ("f2_S", "vector_ST"))
    ratio = modeval.eval_f2(1j).value / modeval.eval_f("f1", 1j).value
    target = 2 ** (1 / 3) * math.pi ** 2 / (6 * math.gamma(1 / 3) ** 3)
    dr = abs(ratio - target)
    return _record("second-order modularity", res < 1e-8 and dr < 1e-9, f"max residual {res:.1e}, f2(i)/f1(i) {dr:.1e}")


def check_ode():
    worst = 0.0
    for params in (cx.PERCOLATION, cx.CrossingParams(0.25, 0.75)):
        for q in ("one", "pih", "pihv"):
            for lam in (0.2, 0.5, 0.8):
                worst = max(worst, cx.ode_residual(q, lam, params))
    return _record("ODE residuals", worst < 1e-4, f"max residual {worst:.1e} (tol 1e-4)")


def check_partition():
    P = cx.PartitionParams
    worst = 0.0
    for c in (0.5, 1.0, -2.0):
        for l, lp in ((1.0, 2.0), (1.0, 3.5), (2.0, 0.7), (0.3, 3.0)):
            z = cx.partition_Z(P(l, lp, c))
            worst = max(worst, abs(cx.partition_Z(P(lp, l, c)) / z - 1),
                        abs(cx.partition_Z(P(3 * l, 3 * lp, c)) / (3 ** (c / 4) * z) - 1))
    return _record("partition function", worst < 1e-10, f"max relative residual {worst:.1e}")


def check_monte_carlo():
    t0 = time.perf_counter()
    threads = os.cpu_count() or 1
    parts, ok = [], True
    for r in (1.0, 2.0):
        spec = LatticeSpec.for_ratio(256, r, 0.5, seed=20240601)
        est = estimate(spec, "horizontal", 100_000, threads)
        target = cx.cardy_pih(spec.r).value
        tol = max(3 * est.stderr, 0.01)
        ok &= abs(est.p_hat - target) < tol
        parts.append(f"{spec.L}x{spec.Lp}: {est.p_hat:.4f} vs {target:.4f}")
    spec = LatticeSpec(16, 17, 0.5, seed=7)
    xor_ok = sum(dual_complement(sample_config(spec, t)) for t in range(10_000))
    ok &= xor_ok == 10_000
    parts.append(f"XOR {xor_ok}/10000")
    worst_z = 0.0
    for (L, Lp), p, which in (((3, 3), 0.5, "horizontal"), ((3, 3), 0.35, "horizontal_and_vertical"),
                              ((4, 2), 0.6, "vertical")):
        col = {"horizontal": 0, "vertical": 1, "horizontal_and_vertical": 2}[which]
        exact = oracles.exact_crossing_probability(L, Lp, p, col)
        est = estimate(LatticeSpec(L, Lp, p, seed=3), which, 40_000)
        z = abs(est.p_hat - exact) / math.sqrt(exact * (1 - exact) / est.trials)
        worst_z = max(worst_z, z)
    ok &= worst_z < 4
    parts.append(f"brute force max z {worst_z:.2f}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    parts.append(f"runtime {dt:.0f}s")
    return _record("Monte Carlo", bool(ok), ", ".join(parts))


CRITERIA = [
    check_exact_coefficients,
    check_f2_decomposition,
    check_three_routes,
    check_functional_equations,
    check_sle_family,
    check_generalized_family,
    check_modularity,
    check_ode,
    check_partition,
    check_monte_carlo,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__[6:] for c in CRITERIA])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
