"""Command-line interface: ``crossprob {series,crossing,sle,mc,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import crossing as cx
from . import qseries as qs
from .percolation import LatticeSpec, estimate
from .special import NonConvergence
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SERIES_KINDS = ("eta", "theta2", "theta3", "lambda", "lambda_prime", "f1", "f2", "f3", "fW", "h")
CROSSING_QUANTITIES = ("pih", "pihvbar", "pihv", "piminus", "pi2", "Z")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def _is_q_series(kind: str, scale: Fraction) -> bool:
    # these are power series in q = qhat**2 times a leading power
    return kind in ("theta2", "f1", "fW") or (kind == "eta" and scale != Fraction(1, 2))


def build_series(kind: str, order: int, gamma=None, scale="1") -> qs.QExpansion:
    """The series behind ``series KIND``.

    For series in ``q`` the result is ``qhat**e * (c_0 + c_1 q + ... + O(q**order))``
    with ``0 <= e < 1`` fixed by the leading exponent, so a series starting at
    ``q`` shows ``order - 1`` coefficients (odd qhat slots are zero and are
    emitted as such).  For the others ``order`` counts qhat-coefficients.
    """
    if order < 1:
        raise UsageError("--order must be positive")
    if (gamma is not None) != (kind == "h"):
        raise UsageError("--gamma is required for kind h and only for it")
    s = Fraction(scale)
    n = 2 * order - 1 if _is_q_series(kind, s) else order
    if kind == "eta":
        return qs.qexp_eta(s, n)
    if kind == "theta2":
        return qs.qexp_theta(2, n)
    if kind == "theta3":
        return qs.qexp_theta(3, n)
    if kind == "lambda":
        return qs.qexp_lambda(max(n, 3)).truncate(n)
    if kind == "lambda_prime":
        return qs.qexp_lambda_prime(max(n, 3)).truncate(n)
    if kind == "h":
        return qs.qexp_h(Fraction(gamma), n)
    return qs.qexp_f(kind, n)


def _build_truncated(kind: str, order: int, gamma=None, scale="1") -> qs.QExpansion:
    f = build_series(kind, order, gamma, scale)
    if not _is_q_series(kind, Fraction(scale)):
        return f
    base = f.leading - math.floor(f.leading)
    return f.truncate_at(base + 2 * order - 1)


def _cmd_series(args) -> int:
    try:
        f = _build_truncated(args.kind, args.order, args.gamma, args.scale)
    except (qs.SeriesError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    out = qs.to_json(f) + "\n" if args.format == "json" else qs.to_csv(f)
    sys.stdout.write(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# crossing
# ---------------------------------------------------------------------------


def _r_values(args) -> list[float]:
    rs = []
    for item in args.r or []:
        rs.extend(float(x) for x in str(item).split(",") if x)
    if args.r_grid:
        try:
            lo, hi, num = args.r_grid.split(":")
            lo, hi, num = float(lo), float(hi), int(num)
        except ValueError as exc:
            raise UsageError("--r-grid expects START:STOP:NUM") from exc
        if num < 1:
            raise UsageError("--r-grid needs NUM >= 1")
        rs.extend(lo if num == 1 else lo + (hi - lo) * k / (num - 1) for k in range(num))
    if not rs:
        raise UsageError("give --r and/or --r-grid")
    return rs


def _crossing_value(q: str, r: float, method: str, alpha, beta, order) -> cx.CrossingValue:
    classical = (alpha is None or alpha == 1 / 3) and (beta is None or beta == 1)
    a = 1 / 3 if alpha is None else alpha
    b = 1.0 if beta is None else beta
    if q == "pih":
        return cx.cardy_pih(r, method, order=order) if alpha is None else cx.pih_alpha(r, a, method, order=order)
    if q == "pihvbar":
        return cx.watts_pihvbar(r, method, order=order) if classical else cx.pi2(r, a, b, method, order=order)
    if q == "pihv":
        return cx.pihv(r, method, order=order) if classical else cx.piminus(r, a, b, method, order=order)
    if q == "piminus":
        return cx.piminus(r, a, b, method, order=order)
    return cx.pi2(r, a, b, method, order=order)


def _cmd_crossing(args) -> int:
    if args.quantity == "Z":
        if args.l is None or args.lp is None:
            raise UsageError("Z needs --l and --lp")
        p = cx.PartitionParams(args.l, args.lp, args.c, args.scale_const)
        rows = [{"l": p.l, "lp": p.lp, "c": p.c, "r": p.lp / p.l, "value": cx.partition_Z(p)}]
        return _emit_rows(rows, args.format)
    methods = cx.METHODS if args.method == "all" else (args.method,)
    default_method = "eta_integral" if args.quantity in ("piminus", "pi2") else "hypergeometric"
    rows = []
    for r in _r_values(args):
        for m in methods:
            v = _crossing_value(args.quantity, r, m or default_method, args.alpha, args.beta, args.order)
            rows.append(v.as_row(r))
    return _emit_rows(rows, args.format)


def _emit_rows(rows: list[dict], fmt: str) -> int:
    if fmt == "json":
        sys.stdout.write(json.dumps(rows) + "\n")
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\r\n")
        w.writeheader()
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# sle, mc, verify
# ---------------------------------------------------------------------------


def _cmd_sle(args) -> int:
    v = cx.sle_crossing(args.lam, args.kappa, args.method)
    return _emit_rows([{"lam": args.lam, "kappa": args.kappa, "method": args.method, "value": v}], args.format)


def _formula_for(quantity: str, r: float) -> float | None:
    if quantity == "horizontal":
        return cx.cardy_pih(r).value
    if quantity == "horizontal_and_vertical":
        return cx.pihv(r).value
    if quantity == "vertical":
        return cx.cardy_pih(1 / r).value
    return None


def _cmd_mc(args) -> int:
    if args.Lp is None and args.r is None:
        raise UsageError("mc needs --Lp or --r")
    if args.Lp is not None:
        spec = LatticeSpec(args.L, args.Lp, args.p, args.seed)
    else:
        spec = LatticeSpec.for_ratio(args.L, float(args.r[0]), args.p, args.seed)
    est = estimate(spec, args.quantity, args.trials, args.threads, backend=args.backend)
    row = est.to_dict()
    formula = _formula_for(est.quantity, spec.r) if spec.p == 0.5 else None
    comparison = None
    if formula is not None:
        delta = est.p_hat - formula
        # z is undefined (null) when every trial agreed and the formula differs
        z = delta / est.stderr if est.stderr > 0 else (0.0 if delta == 0 else None)
        comparison = {"formula": formula, "delta": delta, "z": z}
    if args.format == "json":
        sys.stdout.write(json.dumps({"estimate": row, "comparison": comparison}) + "\n")
        return EXIT_OK
    if comparison:
        row.update(comparison)
    return _emit_rows([row], "csv")


def _cmd_verify(args) -> int:
    reports = run_suite(args.suite, args.tol)
    if args.format == "json":
        doc = {"suites": [r.to_dict() for r in reports], "overall": all(r.overall for r in reports)}
        sys.stdout.write(json.dumps(doc) + "\n")
    else:
        rows = [
            {"suite": r.suite, "identity": c.identity, "inputs": json.dumps(c.inputs),
             "residual": c.residual, "tolerance": c.tolerance, "pass": c.passed}
            for r in reports for c in r.checks
        ]
        _emit_rows(rows, "csv")
    return EXIT_OK if all(r.overall for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_globals(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--order", type=int, default=d(qs.DEFAULT_ORDER),
                   help="series truncation; counts q-coefficients for series in q")
    p.add_argument("--tol", type=float, default=d(None), help="override every tolerance of a verify suite")
    p.add_argument("--threads", type=int, default=d(1))
    p.add_argument("--seed", type=int, default=d(0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossprob", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", help="exact q-expansions")
    _add_globals(s, suppress=True)
    s.add_argument("kind", choices=SERIES_KINDS)
    s.add_argument("--gamma", help="dimension for kind h, e.g. 1/3")
    s.add_argument("--scale", default="1", choices=("1/2", "1", "2"), help="eta(scale*tau) for kind eta")
    s.set_defaults(func=_cmd_series)

    c = sub.add_parser("crossing", help="crossing probabilities and the partition function")
    _add_globals(c, suppress=True)
    c.add_argument("quantity", choices=CROSSING_QUANTITIES)
    c.add_argument("--r", action="append", help="aspect ratio; repeat or comma-separate")
    c.add_argument("--r-grid", help="START:STOP:NUM evenly spaced ratios")
    c.add_argument("--alpha", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--method", default=None, choices=cx.METHODS + ("all",))
    c.add_argument("--l", type=float)
    c.add_argument("--lp", type=float)
    c.add_argument("--c", type=float, default=0.5, help="central charge for Z")
    c.add_argument("--scale-const", type=float, default=1.0)
    c.set_defaults(func=_cmd_crossing)

    e = sub.add_parser("sle", help="SLE crossing formula at a cross-ratio")
    _add_globals(e, suppress=True)
    e.add_argument("--lam", type=float, required=True)
    e.add_argument("--kappa", type=float, default=6.0)
    e.add_argument("--method", default="hyp", choices=("hyp", "integral"))
    e.set_defaults(func=_cmd_sle)

    m = sub.add_parser("mc", help="Monte Carlo crossing frequency")
    _add_globals(m, suppress=True)
    m.add_argument("--L", type=int, default=128)
    m.add_argument("--Lp", type=int)
    m.add_argument("--r", action="append", help="choose Lp from this aspect ratio")
    m.add_argument("--p", type=float, default=0.5)
    m.add_argument("--trials", type=int, default=10_000)
    m.add_argument("--quantity", default="horizontal",
                   choices=("horizontal", "horizontal_and_vertical", "vertical", "h", "hv", "v"))
    m.add_argument("--backend", choices=("numba", "numba_uf", "numpy"))
    m.set_defaults(func=_cmd_mc)

    v = sub.add_parser("verify", help="run identity suites")
    _add_globals(v, suppress=True)
    v.add_argument("suite", choices=tuple(SUITES) + ("all",))
    v.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"crossprob: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"crossprob: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
