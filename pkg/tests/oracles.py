"""Frozen expected values and independent re-derivations for the test suite.

Every number and routine here is produced by a route different from the
library code: closed forms, dense linear algebra on explicit matrices,
scipy root finding and quadrature, exact rational elimination, or a
from-scratch reimplementation of the counter mixing. Tests compare the
library against these, never against itself.
"""

import math
from bisect import bisect_right
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

# ---------------------------------------------------------------------------
# frozen constants (verified against the solvers below at write time)

# root of q = exp(-q)
OMEGA = 0.5671432904097838

# largest-z fixed points z = 1 - exp(c(z-1)) for mean-c branching
Z_STAR_POISSON1 = 0.4328567095902162
Z_STAR_DIRAC3 = (math.sqrt(5.0) - 1.0) / 2.0

# peak heights of the defect curve (kernel mass of the limiting measure)
ATOM_POISSON1 = 0.45593809267640406
ATOM_POISSON2 = 0.21607357304576391
ATOM_POISSON3 = 0.072312542114540745

# double-exponential locus q = exp(-c exp(-c q)) at c = 3
LOCUS_C3 = (0.136119883278776, 0.349969631654679, 0.664739762279161)

# the two maximisers of the defect curve at mean degree 3
ARGMAX_POISSON3 = (0.335260237720839, 0.863880116721224)

# limiting category frequencies (f_plus, f_minus, f_star), child law
TRIPLE_POISSON1 = (0.567143290409784, 0.432856709590216, 0.0)
TRIPLE_POISSON3 = (0.136119883278776, 0.335260237720839, 0.528619879000385)

# regular-graph density at the band centre
KM3_AT_ZERO = math.sqrt(2.0) / (3.0 * math.pi)
KM2_AT_ZERO = 1.0 / (2.0 * math.pi)
PI_KM3_AT_ZERO = math.sqrt(2.0) / 3.0

# counter-mixing constants, duplicated on purpose (independent of rng.py)
_GOLD = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_SALT = 0xD1B54A32D192ED03
_M64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# generating-function side

def poisson_m_curve(c: float, z: float) -> float:
    """Defect curve for a Poisson(c) law, written out in closed form."""
    g = math.exp(c * (z - 1.0))
    return g + (1.0 - z) * c * g + math.exp(-c * g) - 1.0


def z_star_poisson(c: float) -> float:
    """Unique root of z = 1 - exp(c(z-1)) in (0, 1) for c > 0."""
    return optimize.brentq(
        lambda z: z - 1.0 + math.exp(c * (z - 1.0)), 1e-15, 1.0 - 1e-15,
        xtol=1e-15, rtol=8.9e-16)


def locus_roots(c: float, cells: int = 40000) -> list:
    """All roots of q = exp(-c exp(-c q)) in (0, 1) by scan plus brentq."""
    def g(q):
        return q - math.exp(-c * math.exp(-c * q))
    qs = np.linspace(1e-12, 1.0, cells)
    vals = np.array([g(q) for q in qs])
    roots = []
    for a, b, fa, fb in zip(qs, qs[1:], vals, vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0.0:
            roots.append(float(optimize.brentq(g, a, b, xtol=1e-15)))
    return roots


def atom_from_locus(c: float) -> float:
    """Kernel mass via the locus, evaluated at the smallest root.

    Above the branch point the middle root is the saddle of the curve and
    the two outer roots share the larger value; the smallest root always
    carries the mass.
    """
    q = min(locus_roots(c))
    return q + math.exp(-c * q) * (1.0 + c * q) - 1.0


# ---------------------------------------------------------------------------
# dense resolvent oracles for tiny graphs

def stieltjes_diag(adj: np.ndarray, vertex: int, t: float) -> float:
    """Im of the diagonal resolvent at height t via eigendecomposition."""
    lam, vec = np.linalg.eigh(np.asarray(adj, dtype=float))
    w = vec[vertex, :] ** 2
    return float(np.sum(w * t / (lam ** 2 + t ** 2)))


def path3_adjacency() -> np.ndarray:
    return np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)


def star_adjacency(leaves: int) -> np.ndarray:
    a = np.zeros((leaves + 1, leaves + 1))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    return a


def rational_rank(mat) -> int:
    """Exact rank over the rationals by fraction-pivot elimination."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(mat)]
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    rank = 0
    col = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if rows[r][col] != 0),
                     None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(n_rows):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


# ---------------------------------------------------------------------------
# regular-graph density by quadrature

def km_density(d: int, lam: float) -> float:
    edge2 = 4.0 * (d - 1.0)
    if lam * lam >= edge2:
        return 0.0
    return d * math.sqrt(edge2 - lam * lam) / (2.0 * math.pi * (d * d - lam * lam))


def km_cdf_quad(d: int, x: float) -> float:
    edge = 2.0 * math.sqrt(d - 1.0)
    if x <= -edge:
        return 0.0
    if x >= edge:
        return 1.0
    val, _ = integrate.quad(lambda u: km_density(d, u), -edge, x, limit=400)
    return val


# ---------------------------------------------------------------------------
# counter mixing, reimplemented from the published constants

def mix64(x: int) -> int:
    x &= _M64
    x ^= x >> 30
    x = (x * _MIX_A) & _M64
    x ^= x >> 27
    x = (x * _MIX_B) & _M64
    x ^= x >> 31
    return x


def derive_key(seed: int, domain: int, generation: int) -> int:
    inner = mix64((seed ^ (domain * _GOLD)) & _M64)
    return mix64((inner + generation * _SALT) & _M64)


def word(key: int, index: int, draw: int) -> int:
    inner = mix64((key + index * _GOLD) & _M64)
    return mix64((inner ^ (draw * _SALT)) & _M64)


def uniform(key: int, index: int, draw: int) -> float:
    return (word(key, index, draw) >> 11) * (2.0 ** -53)


# ---------------------------------------------------------------------------
# pure-python reference for one resolvent sweep and one category sweep

def ref_stieltjes_step(s_in, t, cdf, key):
    n = len(s_in)
    out = []
    for i in range(n):
        k = bisect_right(cdf, uniform(key, i, 0))
        acc = 0.0
        for d in range(k):
            j = int(uniform(key, i, 1 + d) * n)
            acc += s_in[j]
        out.append(1.0 / (t + acc))
    return out


PLUS, MINUS, STAR = 0, 1, 2


def ref_alphabeta_step(cat_in, pay_in, cdf, key):
    n = len(cat_in)
    cats, pays = [], []
    for i in range(n):
        k = bisect_right(cdf, uniform(key, i, 0))
        n_plus = 0
        sum_alpha = 0.0
        sum_beta = 0.0
        saw_star = False
        for d in range(k):
            j = int(uniform(key, i, 1 + d) * n)
            if cat_in[j] == PLUS:
                n_plus += 1
                sum_alpha += pay_in[j]
            elif cat_in[j] == MINUS:
                sum_beta += pay_in[j]
            else:
                saw_star = True
        if n_plus >= 1:
            cats.append(MINUS)
            pays.append(1.0 / sum_alpha)
        elif saw_star:
            cats.append(STAR)
            pays.append(0.0)
        else:
            cats.append(PLUS)
            pays.append(1.0 / (1.0 + sum_beta))
    return cats, pays
