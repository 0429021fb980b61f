"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py --points 20000 --repeat 5

The first numba call per signature compiles (or loads from the on-disk
cache), so it is run once before timing.
"""
import argparse
import time

import numpy as np

from confmax import _kernels as K
from confmax import conformal as C
from confmax import fields as F
from confmax.geometry import haar_sample


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--k", type=int, default=5, help="basis solution degree for the polynomial table")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    pts = haar_sample(rng, args.points)
    w = F.maxwell_basis((args.k, "R", 1))
    tabs = [c.table(i) for i, c in enumerate(w.coeffs)]
    exps = np.concatenate([t[0] for t in tabs])
    coefs = np.concatenate([t[1] for t in tabs])
    slots = np.concatenate([t[2] for t in tabs])
    g = C.random_g1(rng).matrix
    vals = rng.standard_normal(args.points * 10) + 1j * rng.standard_normal(args.points * 10)

    cases = [
        (f"poly_eval ({len(coefs)} terms)", lambda: K.poly_eval_numpy(exps, coefs, slots, 6, pts),
         lambda: K.poly_eval_numba(exps, coefs, slots, 6, pts)),
        ("mobius", lambda: K.mobius_numpy(g, pts), lambda: K.mobius_numba(g, pts)),
        ("compensated_sum", lambda: K.compensated_sum_numpy(vals), lambda: K.compensated_sum_numba(vals)),
    ]
    print(f"{args.points} points, best of {args.repeat}")
    print(f"{'kernel':28s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, f_np, f_nb in cases:
        f_nb()
        t_np = best_of(f_np, args.repeat)
        t_nb = best_of(f_nb, args.repeat)
        print(f"{name:28s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
