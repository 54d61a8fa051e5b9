"""Verification suites: each runs a family of identities and reports residuals."""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import crossing as cx
from . import modeval
from .percolation import LatticeSpec, dual_complement, sample_config

__all__ = ["Check", "SUITES", "VerdictReport", "run_suite"]

R_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, 4.0)
ROUTE_GRID = (0.5, 1.0, 1.5, 2.0, 4.0)
TAU_SAMPLES = (1j, 1.2j, 0.8j, 1.5j, 0.4 + 1.3j)

DEFAULT_TOL = {
    "duality": 1e-10,
    "symmetry": 1e-9,
    "routes": 1e-8,
    "modular": 1e-8,
    "thm3": 1e-8,
    "ode": 1e-4,
    "partition": 1e-10,
    "exact": 1e-12,
}


@dataclass(frozen=True)
class Check:
    identity: str
    inputs: dict
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual < self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


@dataclass
class VerdictReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, identity: str, inputs: dict, residual: float, tol: float):
        self.checks.append(Check(identity, inputs, abs(float(residual)), tol))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_dict() for c in self.checks], "overall": self.overall}


def _tol(kind: str, override: float | None) -> float:
    return DEFAULT_TOL[kind] if override is None else override


def suite_duality(tol=None) -> VerdictReport:
    rep = VerdictReport("duality")
    for method in cx.METHODS:
        # only the hypergeometric route maps r < 1 through the functional equation
        for r in R_GRID:
            s = cx.cardy_pih(r, method).value + cx.cardy_pih(1 / r, method).value
            rep.add("Pi_h(r) + Pi_h(1/r) = 1", {"r": r, "method": method}, s - 1, _tol("duality", tol))
        for r in R_GRID:
            d = cx.pihv(r, method).value - cx.pihv(1 / r, method).value
            rep.add("Pi_hv(r) = Pi_hv(1/r)", {"r": r, "method": method}, d, _tol("symmetry", tol))
        rep.add("Pi_h(1) = 1/2", {"method": method}, cx.cardy_pih(1.0, method).value - 0.5, _tol("duality", tol))
    return rep


def suite_routes(tol=None) -> VerdictReport:
    rep = VerdictReport("routes")
    for name, fn in (("Pi_h", cx.cardy_pih), ("Pi_hvbar", cx.watts_pihvbar)):
        for r in ROUTE_GRID:
            vals = {m: fn(r, m).value for m in cx.METHODS}
            for a, b in itertools.combinations(cx.METHODS, 2):
                rep.add(f"{name}: {a} = {b}", {"r": r}, vals[a] - vals[b], _tol("routes", tol))
    for alpha in (0.2, 0.25, 0.4, 0.45):
        r = 1.5
        vals = {m: cx.pih_alpha(r, alpha, m).value for m in cx.METHODS}
        for a, b in itertools.combinations(cx.METHODS, 2):
            rep.add(f"Pi_h(r; alpha): {a} = {b}", {"r": r, "alpha": alpha}, vals[a] - vals[b], _tol("routes", tol))
    return rep


def suite_modular(tol=None) -> VerdictReport:
    rep = VerdictReport("modular")
    t = _tol("modular", tol)
    for tau in TAU_SAMPLES:
        inp = {"tau": str(tau)}
        rep.add("tau^-2 f2(-1/tau) = f2(tau) - C f1(tau)", inp, modeval.check_transformation("f2_S", tau), t)
        rep.add("f2(tau + 2) = f2(tau)", inp,
                abs(modeval.eval_f2(tau + 2).value - modeval.eval_f2(tau).value), t)
        rep.add("tau^-2 f1(-1/tau) = -f1(tau)", inp, modeval.check_transformation("f1_S", tau), t)
        rep.add("F(tau+2), tau^-2 F(-1/tau) matrix relations", inp, modeval.check_transformation("vector_ST", tau), t)
        f1 = modeval.eval_f("f1", tau).value
        rep.add("f1(tau + 1) = exp(pi i/3) f1(tau)", inp,
                abs(modeval.eval_f("f1", tau + 1).value - complex(math.cos(math.pi / 3), math.sin(math.pi / 3)) * f1), t)
    ratio = modeval.eval_f2(1j).value / modeval.eval_f("f1", 1j).value
    target = 2 ** (1 / 3) * math.pi ** 2 / (6 * math.gamma(1 / 3) ** 3)
    rep.add("f2(i)/f1(i) = 2^(1/3) pi^2 / (6 Gamma(1/3)^3)", {"tau": "1j"}, abs(ratio - target), 1e-9)
    for tau in (1.5j, 0.8j + 0.3):
        q = modeval.f2_quadrature(tau)
        s = modeval.eval_f2(tau).value
        rep.add("f2 series = f2 quadrature (relative)", {"tau": str(tau)}, abs(q - s) / abs(s), t)
    return rep


def suite_thm3(tol=None) -> VerdictReport:
    rep = VerdictReport("thm3")
    t = _tol("thm3", tol)
    for r in (0.5, 1.0, 1.5, 2.0):
        for m in ("eta_integral", "lambda_integral"):
            rep.add("Pi_-(r; 1/3, 1) = Pi_hv(r)", {"r": r, "method": m},
                    cx.piminus(r, 1 / 3, 1, m).value - cx.pihv(r).value, t)
            rep.add("Pi_2(r; 1/3, 1) = Pi_hvbar(r)", {"r": r, "method": m},
                    cx.pi2(r, 1 / 3, 1, m).value - cx.watts_pihvbar(r).value, t)
    for m in ("eta_integral", "lambda_integral"):
        rep.add("Pi_-(2) = Pi_-(1/2) at (1/4, 3/4)", {"method": m},
                cx.piminus(2, 0.25, 0.75, m).value - cx.piminus(0.5, 0.25, 0.75, m).value, t)
        s = cx.piminus(1.3, 0.25, 0.75, m).value + cx.pi2(1.3, 0.25, 0.75, m).value
        rep.add("Pi_- + Pi_2 = Pi_h(.; 1/4) at r=1.3", {"method": m}, s - cx.pih_alpha(1.3, 0.25).value, t)
    rep.add("beta=1 closed-form prefactor at alpha=1/3 = sqrt(3)/(2 pi)", {},
            cx.pihvbar_beta1_prefactor(1 / 3) - math.sqrt(3) / (2 * math.pi), _tol("exact", None))
    rep.add("3F2 closed form = Pi_2(r; 1/4, 1)", {"r": 1.5},
            cx.pihvbar_beta1(1.5, 0.25).value - cx.pi2(1.5, 0.25, 1.0).value, t)
    rep.add("C(1/3, 1) = 16 pi / sqrt(3)", {},
            cx.c_alpha_beta(1 / 3, 1) / (16 * math.pi / math.sqrt(3)) - 1, _tol("exact", None))
    return rep


def suite_ode(tol=None) -> VerdictReport:
    rep = VerdictReport("ode")
    t = _tol("ode", tol)
    for ab in ((1 / 3, 1.0), (0.25, 0.75)):
        params = cx.CrossingParams(*ab)
        for q in ("one", "pih", "pihv"):
            for lam in (0.3, 0.5, 0.7):
                rep.add(f"third-order ODE residual of {q}", {"alpha": ab[0], "beta": ab[1], "lam": lam},
                        cx.ode_residual(q, lam, params), t)
    return rep


def suite_partition(tol=None) -> VerdictReport:
    rep = VerdictReport("partition")
    t = _tol("partition", tol)
    P = cx.PartitionParams
    for c in (0.5, 1.0, -2.0):
        for l, lp in ((1.0, 2.0), (1.0, 3.5), (2.0, 0.7)):
            a, b = cx.partition_Z(P(l, lp, c)), cx.partition_Z(P(lp, l, c))
            rep.add("Z(l, l') = Z(l', l) (relative)", {"l": l, "lp": lp, "c": c}, a / b - 1, t)
            z3 = cx.partition_Z(P(3 * l, 3 * lp, c))
            rep.add("Z(3l, 3l') = 3^(c/4) Z(l, l') (relative)", {"l": l, "lp": lp, "c": c},
                    z3 / (3 ** (c / 4) * cx.partition_Z(P(l, lp, c))) - 1, t)
            tau = complex(0, lp / l)
            rep.add("|Z| unchanged under tau -> tau + 2 (relative)", {"l": l, "lp": lp, "c": c},
                    cx.partition_Z(P(l, lp, c), tau + 2) / cx.partition_Z(P(l, lp, c), tau) - 1, t)
    rep.add("c = 0 gives the scale constant", {}, cx.partition_Z(P(1.3, 0.4, 0.0, 2.5)) - 2.5, t)
    return rep


def suite_dualitymc(tol=None, configs: int = 10_000, seed: int = 2024) -> VerdictReport:
    rep = VerdictReport("dualitymc")
    spec = LatticeSpec(16, 17, 0.5, seed)
    bad = sum(not dual_complement(sample_config(spec, t)) for t in range(configs))
    rep.add("primal horizontal XOR dual vertical", {"L": 16, "Lp": 17, "configs": configs}, bad, 0.5)
    return rep


SUITES: dict[str, Callable[..., VerdictReport]] = {
    "duality": suite_duality,
    "routes": suite_routes,
    "modular": suite_modular,
    "thm3": suite_thm3,
    "ode": suite_ode,
    "partition": suite_partition,
    "dualitymc": suite_dualitymc,
}


def run_suite(name: str, tol: float | None = None) -> list[VerdictReport]:
    """Run one suite, or every suite for ``name == "all"``."""
    if name == "all":
        return [fn(tol) for fn in SUITES.values()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES) + ['all']}")
    return [SUITES[name](tol)]
