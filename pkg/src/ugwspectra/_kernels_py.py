"""Vectorised NumPy implementation of the hot kernels.

Mirror of the compiled extension, kept in lockstep with it: same counter
RNG, same draw layout (draw 0 picks the child count, draw 1+d picks child
d), and crucially the same floating-point summation order. The slot loop
accumulates child contributions in child order d = 0, 1, 2, ..., which is
exactly the order the scalar loop adds them, so outputs are bit-identical
across backends and thread counts.
"""

from __future__ import annotations

import numpy as np

from .rng import uniforms_np

PLUS = 0
MINUS = 1
STAR = 2

BACKEND = "python"


def _draw_counts(cdf: np.ndarray, key: int, idx: np.ndarray) -> np.ndarray:
    u = uniforms_np(key, idx, 0)
    return np.searchsorted(cdf, u, side="right")


def stieltjes_step(s_in, t, cdf, key, s_out, i0, i1):
    n_src = len(s_in)
    idx = np.arange(i0, i1, dtype=np.uint64)
    k = _draw_counts(cdf, key, idx)
    acc = np.zeros(i1 - i0)
    kmax = int(k.max()) if len(k) else 0
    for d in range(kmax):
        sel = np.nonzero(k > d)[0]
        u = uniforms_np(key, idx[sel], 1 + d)
        j = (u * n_src).astype(np.int64)
        acc[sel] += s_in[j]
    s_out[i0:i1] = 1.0 / (t + acc)


def alphabeta_step(cat_in, pay_in, cdf, key, cat_out, pay_out, i0, i1):
    n_src = len(cat_in)
    idx = np.arange(i0, i1, dtype=np.uint64)
    k = _draw_counts(cdf, key, idx)
    n = i1 - i0
    n_plus = np.zeros(n, dtype=np.int64)
    sum_a = np.zeros(n)
    sum_b = np.zeros(n)
    star = np.zeros(n, dtype=bool)
    kmax = int(k.max()) if n else 0
    for d in range(kmax):
        sel = np.nonzero(k > d)[0]
        u = uniforms_np(key, idx[sel], 1 + d)
        j = (u * n_src).astype(np.int64)
        c = cat_in[j]
        p = pay_in[j]
        pm = c == PLUS
        mm = c == MINUS
        n_plus[sel[pm]] += 1
        sum_a[sel[pm]] += p[pm]
        sum_b[sel[mm]] += p[mm]
        star[sel[c == STAR]] = True
    minus_mask = n_plus > 0
    star_mask = ~minus_mask & star
    plus_mask = ~(minus_mask | star_mask)
    cat = np.empty(n, dtype=np.uint8)
    pay = np.empty(n)
    cat[minus_mask] = MINUS
    pay[minus_mask] = 1.0 / sum_a[minus_mask]
    cat[star_mask] = STAR
    pay[star_mask] = 0.0
    cat[plus_mask] = PLUS
    pay[plus_mask] = 1.0 / (1.0 + sum_b[plus_mask])
    cat_out[i0:i1] = cat
    pay_out[i0:i1] = pay


def coupled_step(s_in, cat_in, pay_in, t, cdf, key, s_out, cat_out, pay_out, i0, i1):
    """One generation of both recursions under shared draws.

    Child counts and child picks come from the same counter words, so row i
    of the resolvent pool and row i of the category pool describe the same
    realised tree. That joint structure is what the per-sample atom
    subtraction in the sweep relies on.
    """
    stieltjes_step(s_in, t, cdf, key, s_out, i0, i1)
    alphabeta_step(cat_in, pay_in, cdf, key, cat_out, pay_out, i0, i1)


def rank_mod_p(mat: np.ndarray, p: int) -> int:
    """Row rank of a square matrix over GF(p) by plain elimination.

    Exact big-integer arithmetic; for desk-sized cores only. The compiled
    twin does the same pivots in 128-bit machine arithmetic.
    """
    n = mat.shape[0]
    rows = [[int(x) % p for x in mat[i]] for i in range(n)]
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, n):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        lead = rows[rank]
        for i in range(rank + 1, n):
            f = rows[i][col]
            if f:
                ri = rows[i]
                for kk in range(col, n):
                    ri[kk] = (ri[kk] - f * lead[kk]) % p
        rank += 1
        if rank == n:
            break
    return rank
