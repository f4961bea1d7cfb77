#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the pure-Python port.

Both implementations consume the same counter-mode draws, so outputs must
match bit for bit; the script asserts that before reporting speedups.

Run from the repository root:

    python benchmarks/bench_kernels.py [--pool 200000] [--reps 5]
"""

import argparse
import time

import numpy as np

from ugwspectra import DegreeDistribution
from ugwspectra import _kernels_py as pyk
from ugwspectra.rng import DOM_OFFSPRING, derive_key

try:
    from ugwspectra import _kernels as ck
except ImportError:
    ck = None


def best_of(reps, fn, *args):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_stieltjes(pool, reps):
    dist = DegreeDistribution.parse("poisson:3")
    cdf = dist.cdf_table()
    t = 1e-3
    s_in = np.full(pool, 1.0 / t)
    key = derive_key(7, DOM_OFFSPRING, 1)

    out_py = np.empty(pool)
    t_py = best_of(reps, pyk.stieltjes_step, s_in, t, cdf, key, out_py, 0, pool)
    row = ("resolvent step", t_py, None)
    if ck is not None:
        out_c = np.empty(pool)
        t_c = best_of(reps, ck.stieltjes_step, s_in, t, cdf, key, out_c, 0, pool)
        assert np.array_equal(out_py, out_c), "backend outputs differ"
        row = ("resolvent step", t_py, t_c)
    return row


def bench_alphabeta(pool, reps):
    dist = DegreeDistribution.parse("poisson:3").size_biased()
    cdf = dist.cdf_table()
    key = derive_key(7, DOM_OFFSPRING, 1)
    cat_in = np.zeros(pool, dtype=np.uint8)
    pay_in = np.ones(pool)

    cat_py = np.empty(pool, dtype=np.uint8)
    pay_py = np.empty(pool)
    t_py = best_of(reps, pyk.alphabeta_step, cat_in, pay_in, cdf, key,
                   cat_py, pay_py, 0, pool)
    row = ("category step", t_py, None)
    if ck is not None:
        cat_c = np.empty(pool, dtype=np.uint8)
        pay_c = np.empty(pool)
        t_c = best_of(reps, ck.alphabeta_step, cat_in, pay_in, cdf, key,
                      cat_c, pay_c, 0, pool)
        assert np.array_equal(cat_py, cat_c), "backend outputs differ"
        assert np.array_equal(pay_py, pay_c), "backend outputs differ"
        row = ("category step", t_py, t_c)
    return row


def bench_rank(reps):
    rng = np.random.default_rng(3)
    n = 220
    mat = (rng.random((n, n)) < 0.02).astype(np.uint64)
    mat = np.maximum(mat, mat.T)
    p = 2305843009213693951  # 2^61 - 1

    t_py = best_of(reps, pyk.rank_mod_p, mat.copy(), p)
    row = (f"rank mod p ({n}x{n})", t_py, None)
    if ck is not None:
        r_py = pyk.rank_mod_p(mat.copy(), p)
        r_c = ck.rank_mod_p(mat.copy(), p)
        assert r_py == r_c, "backend ranks differ"
        t_c = best_of(reps, ck.rank_mod_p, mat.copy(), p)
        row = (f"rank mod p ({n}x{n})", t_py, t_c)
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pool", type=int, default=200_000)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    if ck is None:
        print("compiled extension not importable; timing pure Python only\n")

    rows = [
        bench_stieltjes(args.pool, args.reps),
        bench_alphabeta(args.pool, args.reps),
        bench_rank(args.reps),
    ]
    print(f"{'kernel':24s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, t_py, t_c in rows:
        if t_c is None:
            print(f"{name:24s} {t_py * 1e3:10.2f}ms {'-':>12s} {'-':>9s}")
        else:
            print(f"{name:24s} {t_py * 1e3:10.2f}ms {t_c * 1e3:10.2f}ms "
                  f"{t_py / t_c:8.1f}x")
    if ck is not None:
        print("\nbit-identity between backends verified on every kernel")


if __name__ == "__main__":
    main()
