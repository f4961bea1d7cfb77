# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled scalar implementation of the hot kernels.

Must stay bit-compatible with _kernels_py: same mixer, same draw layout,
and child contributions added strictly in child order. Any change here
needs the mirror change there, and the cross-backend identity test will
catch drift.
"""

import numpy as np

cimport numpy as cnp

ctypedef unsigned long long u64

cdef extern from *:
    # alias parses as u64; the cname string makes the generated C use the
    # 128-bit type, which gcc and clang provide on every 64-bit target
    ctypedef unsigned long long u128 "unsigned __int128"

cdef u64 GOLD = 0x9E3779B97F4A7C15ULL
cdef u64 MIX_A = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX_B = 0x94D049BB133111EBULL
cdef u64 SALT = 0xD1B54A32D192ED03ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0

cdef unsigned char PLUS = 0
cdef unsigned char MINUS = 1
cdef unsigned char STAR = 2

BACKEND = "compiled"


cdef inline u64 mix64(u64 x) nogil:
    x ^= x >> 30
    x *= MIX_A
    x ^= x >> 27
    x *= MIX_B
    x ^= x >> 31
    return x


cdef inline double uniform(u64 key, u64 index, u64 draw) nogil:
    cdef u64 w = mix64(key + index * GOLD)
    w = mix64(w ^ (draw * SALT))
    return <double>(w >> 11) * INV_2_53


cdef inline Py_ssize_t draw_count(double u, double[::1] cdf) nogil:
    # bisect_right: number of table entries <= u
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if u < cdf[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def stieltjes_step(double[::1] s_in, double t, double[::1] cdf, u64 key,
                   double[::1] s_out, Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t i, d, j, k
    cdef Py_ssize_t n_src = s_in.shape[0]
    cdef double acc, u
    with nogil:
        for i in range(i0, i1):
            k = draw_count(uniform(key, <u64>i, 0), cdf)
            acc = 0.0
            for d in range(k):
                u = uniform(key, <u64>i, <u64>(1 + d))
                j = <Py_ssize_t>(u * n_src)
                acc += s_in[j]
            s_out[i] = 1.0 / (t + acc)


def alphabeta_step(unsigned char[::1] cat_in, double[::1] pay_in, double[::1] cdf,
                   u64 key, unsigned char[::1] cat_out, double[::1] pay_out,
                   Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t i, d, j, k, n_plus
    cdef Py_ssize_t n_src = cat_in.shape[0]
    cdef double sum_a, sum_b, u
    cdef bint star_seen
    cdef unsigned char c
    with nogil:
        for i in range(i0, i1):
            k = draw_count(uniform(key, <u64>i, 0), cdf)
            n_plus = 0
            sum_a = 0.0
            sum_b = 0.0
            star_seen = 0
            for d in range(k):
                u = uniform(key, <u64>i, <u64>(1 + d))
                j = <Py_ssize_t>(u * n_src)
                c = cat_in[j]
                if c == PLUS:
                    n_plus += 1
                    sum_a += pay_in[j]
                elif c == MINUS:
                    sum_b += pay_in[j]
                else:
                    star_seen = 1
            if n_plus > 0:
                cat_out[i] = MINUS
                pay_out[i] = 1.0 / sum_a
            elif star_seen:
                cat_out[i] = STAR
                pay_out[i] = 0.0
            else:
                cat_out[i] = PLUS
                pay_out[i] = 1.0 / (1.0 + sum_b)


def coupled_step(double[::1] s_in, unsigned char[::1] cat_in, double[::1] pay_in,
                 double t, double[::1] cdf, u64 key,
                 double[::1] s_out, unsigned char[::1] cat_out, double[::1] pay_out,
                 Py_ssize_t i0, Py_ssize_t i1):
    # identical draws feed both recursions; see the fallback's docstring
    stieltjes_step(s_in, t, cdf, key, s_out, i0, i1)
    alphabeta_step(cat_in, pay_in, cdf, key, cat_out, pay_out, i0, i1)


cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64>((<u128>a * <u128>b) % <u128>p)


cdef inline u64 powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


def rank_mod_p(cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] mat, u64 p):
    """Row rank over GF(p); destroys its input. 128-bit products keep
    61-bit moduli exact."""
    cdef Py_ssize_t n = mat.shape[0]
    cdef u64[:, ::1] a = mat
    cdef Py_ssize_t rank = 0, col, i, kk, piv
    cdef u64 inv, f
    with nogil:
        for col in range(n):
            piv = -1
            for i in range(rank, n):
                if a[i, col] % p != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for kk in range(n):
                    f = a[rank, kk]
                    a[rank, kk] = a[piv, kk]
                    a[piv, kk] = f
            inv = powmod(a[rank, col], p - 2, p)
            for kk in range(col, n):
                a[rank, kk] = mulmod(a[rank, kk] % p, inv, p)
            for i in range(rank + 1, n):
                f = a[i, col] % p
                if f != 0:
                    for kk in range(col, n):
                        a[i, kk] = (a[i, kk] + p - mulmod(f, a[rank, kk], p)) % p
            rank += 1
            if rank == n:
                break
    return rank
