"""Compare the numba kernels with the numpy/scipy fallback on the trial counter.

    python3 benchmarks/bench_kernels.py --L 64 --trials 2000

Counts must agree exactly; the script exits with status 1 if they do not.
"""
import argparse
import sys
import time

from crossprob import _accel
from crossprob.percolation import LatticeSpec, estimate


def timed(spec, quantity, trials, backend, threads=1):
    t0 = time.perf_counter()
    est = estimate(spec, quantity, trials, threads, backend=backend)
    return est.successes, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, default=64)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--quantity", default="horizontal_and_vertical")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    spec = LatticeSpec(args.L, args.L, 0.5, seed=1)
    backends = ["numpy"]
    if _accel.HAVE_NUMBA:
        backends = ["numba", "numba_uf", "numpy"]
        estimate(LatticeSpec(8, 8), args.quantity, 10, backend="numba")  # compile outside the timing
        estimate(LatticeSpec(8, 8), args.quantity, 10, backend="numba_uf")
    else:
        print("numba unavailable or disabled; timing the fallback only")

    rows = []
    for b in backends:
        count, dt = timed(spec, args.quantity, args.trials, b, args.threads)
        rows.append((b, count, dt))
    base = rows[-1][2]
    print(f"{args.L}x{args.L}, {args.trials} trials, {args.quantity}")
    print(f"{'backend':<10}{'count':>8}{'seconds':>10}{'trials/s':>12}{'speedup':>9}")
    for b, count, dt in rows:
        print(f"{b:<10}{count:>8}{dt:>10.3f}{args.trials / dt:>12.0f}{base / dt:>9.1f}")
    if len({c for _, c, _ in rows}) != 1:
        print("MISMATCH between backends", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
