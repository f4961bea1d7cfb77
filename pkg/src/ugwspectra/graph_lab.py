"""Finite-graph laboratory: samplers, spectra, kernel dimension, densities.

The adjacency kernel dimension is computed two independent ways. The
authoritative route reduces the graph exactly first (isolated vertices
and pendant pairs come out of the matrix over *any* field) and then runs
Gaussian elimination modulo a random 60-bit prime on the remaining core;
a wrong answer would need the prime to divide a specific nonzero minor,
which has probability ~ rank / 2^60 per prime. The floating route counts
eigenvalues below a threshold and is cheap when a full spectrum is being
computed anyway, but inherits eigensolver error. When both run, the
modular rank is the one to trust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .backend import kernels
from .degree_model import DegreeDistribution
from .errors import (CapExceeded, DegreeExceedsN, DomainError, NumericalError)
from .rng import (DOM_DEGREE, DOM_ER, DOM_PRIME, DOM_STUB, RngStream,
                  derive_key, uniforms_np, word)

EIGEN_CAP = 4096


@dataclass(frozen=True)
class SparseGraph:
    """Undirected graph as sorted neighbour lists.

    Multi-edges repeat the neighbour; a self-loop puts the vertex in its
    own list twice. ``edge_count`` counts edges (loops once), ``simple``
    records whether the instance is loop- and multi-edge-free.
    """

    n: int
    adjacency: tuple
    edge_count: int
    simple: bool

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                a[i, j] += 1.0
        return a


def _graph_from_pairs(n: int, pairs, simple_input: bool) -> SparseGraph:
    lists = [[] for _ in range(n)]
    m = 0
    for i, j in pairs:
        m += 1
        lists[i].append(j)
        if i == j:
            lists[i].append(j)
        else:
            lists[j].append(i)
    adjacency = tuple(tuple(sorted(l)) for l in lists)
    if simple_input:
        simple = True
    else:
        simple = all(
            len(nbrs) == len(set(nbrs)) and i not in nbrs
            for i, nbrs in enumerate(adjacency)
        )
    return SparseGraph(n, adjacency, m, simple)


# ---------------------------------------------------------------------------
# samplers


def sample_er(n: int, c: float, seed: int = 0) -> SparseGraph:
    """Erdos-Renyi G(n, c/n), each unordered pair kept independently.

    Pair (i, j) is decided by the counter word at index i*n + j, so the
    graph depends only on (n, c, seed) and not on traversal order.
    """
    if n < 1:
        raise DomainError(f"need at least one vertex, got n={n}")
    if not 0 <= c <= n:
        raise DomainError(f"mean degree must satisfy 0 <= c <= n, got {c}")
    p = min(c / n, 1.0)
    key = derive_key(seed, DOM_ER, 0)
    pairs = []
    for i in range(n - 1):
        js = np.arange(i + 1, n, dtype=np.uint64)
        u = uniforms_np(key, np.uint64(i) * np.uint64(n) + js, 0)
        for j in js[u < p]:
            pairs.append((i, int(j)))
    return _graph_from_pairs(n, pairs, simple_input=True)


def sample_config_model(n: int, dist: DegreeDistribution, seed: int = 0,
                        erased: bool = False) -> SparseGraph:
    """Configuration model by uniform stub pairing.

    Degrees are drawn from ``dist``; an odd total is repaired by redrawing
    the last vertex's degree (up to 1000 attempts). The raw pairing is a
    multigraph; ``erased`` drops loops and collapses repeated edges.
    """
    if n < 1:
        raise DomainError(f"need at least one vertex, got n={n}")
    deg_stream = RngStream(seed, DOM_DEGREE, 0)
    degrees = dist.sample_many(deg_stream, n).astype(np.int64)
    for attempt in range(1, 1001):
        if int(degrees.sum()) % 2 == 0:
            break
        degrees[n - 1] = dist.sample(deg_stream, n - 1, attempt)
    else:
        raise DomainError("could not reach an even stub total in 1000 redraws")
    if int(degrees.max(initial=0)) >= n:
        raise DegreeExceedsN(
            f"degree {int(degrees.max())} needs at least {int(degrees.max()) + 1} "
            f"vertices, graph has {n}"
        )

    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    key = derive_key(seed, DOM_STUB, 0)
    order = np.argsort(
        uniforms_np(key, np.arange(len(stubs), dtype=np.uint64), 0),
        kind="stable",
    )
    shuffled = stubs[order]
    left = shuffled[0::2]
    right = shuffled[1::2]
    pairs = [(int(min(a, b)), int(max(a, b))) for a, b in zip(left, right)]
    if erased:
        pairs = sorted({(a, b) for a, b in pairs if a != b})
    return _graph_from_pairs(n, pairs, simple_input=erased)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    n: int
    solver_residual: float


def eigenvalues(graph: SparseGraph, cap: int = EIGEN_CAP) -> SpectrumResult:
    """Full adjacency spectrum, ascending. Dense solve, hence the cap."""
    if graph.n > cap:
        raise CapExceeded(f"n={graph.n} exceeds the dense-spectrum cap {cap}")
    a = graph.adjacency_matrix()
    eigs = np.linalg.eigvalsh(a)
    # residual from the exact trace identities rather than eigenvectors
    r1 = abs(float(eigs.sum()) - float(np.trace(a)))
    r2 = abs(float(eigs @ eigs) - float((a * a).sum()))
    residual = max(r1, r2) / max(1, graph.n)
    return SpectrumResult(np.sort(eigs), graph.n, residual)


# ---------------------------------------------------------------------------
# kernel dimension


@dataclass(frozen=True)
class NullityResult:
    nullity: int
    method: str
    n: int


def _is_probable_prime(m: int) -> bool:
    # deterministic Miller-Rabin for 64-bit integers
    if m < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % q == 0:
            return m == q
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def random_prime(seed: int, which: int = 0) -> int:
    """Uniform-ish 61-bit prime from the counter stream."""
    draw = 0
    while True:
        w = word(derive_key(seed, DOM_PRIME, which), 0, draw)
        cand = (1 << 60) | (w % (1 << 60)) | 1
        if _is_probable_prime(cand):
            return cand
        draw += 1


def _peel(graph: SparseGraph):
    """Exact reduction: isolated vertices and pendant pairs.

    An isolated vertex contributes one kernel dimension. A pendant vertex
    u with sole neighbour v pins an invertible 2x2 block whose Schur
    complement leaves every other entry untouched (u's row has a single
    nonzero), so u and v add exactly 2 to the rank over any field and can
    be deleted. Loops count twice towards degree, so a looped vertex is
    never pendant. Returns (kernel contribution, rank contribution,
    surviving vertex list).
    """
    alive = [True] * graph.n
    deg = [len(nbrs) for nbrs in graph.adjacency]
    mult = [None] * graph.n  # per-vertex neighbour multiset, built lazily

    def neighbours(v):
        if mult[v] is None:
            d = {}
            for w_ in graph.adjacency[v]:
                d[w_] = d.get(w_, 0) + 1
            mult[v] = d
        return mult[v]

    kernel = 0
    rank = 0
    stack = [v for v in range(graph.n) if deg[v] == 0]
    for v in stack:
        alive[v] = False
        kernel += 1
    leafq = [v for v in range(graph.n) if alive[v] and deg[v] == 1]
    while leafq:
        u = leafq.pop()
        if not alive[u] or deg[u] != 1:
            continue
        v = next(w_ for w_, c in neighbours(u).items() if alive[w_] and c > 0)
        alive[u] = False
        alive[v] = False
        rank += 2
        for w_, c in neighbours(v).items():
            if alive[w_]:
                deg[w_] -= c
                if deg[w_] == 0:
                    alive[w_] = False
                    kernel += 1
                elif deg[w_] == 1:
                    leafq.append(w_)
    core = [v for v in range(graph.n) if alive[v]]
    return kernel, rank, core


def nullity(graph: SparseGraph, method: str = "rank_mod_prime",
            seed: int = 0, tol: float | None = None,
            which_prime: int = 0) -> NullityResult:
    """Dimension of the adjacency kernel.

    rank_mod_prime: exact peeling, then GF(p) elimination on the core for
    a random 61-bit prime p. svd: count eigenvalues within ``tol``
    (default n * 1e-8) of zero; needs the dense spectrum.
    """
    if method == "rank_mod_prime":
        kernel, _, core = _peel(graph)
        p = random_prime(seed, which_prime)
        if core:
            idx = {v: i for i, v in enumerate(core)}
            m = np.zeros((len(core), len(core)), dtype=np.uint64)
            for v in core:
                for w_ in graph.adjacency[v]:
                    if w_ in idx:
                        m[idx[v], idx[w_]] += np.uint64(1)
            rank_core = int(kernels.rank_mod_p(m, p))
            kernel += len(core) - rank_core
        return NullityResult(kernel, f"RankModPrime({p})", graph.n)
    if method == "svd":
        if tol is None:
            tol = graph.n * 1e-8
        eigs = eigenvalues(graph).eigenvalues
        count = int(np.count_nonzero(np.abs(eigs) <= tol))
        return NullityResult(count, f"SvdThreshold({tol:g})", graph.n)
    raise DomainError(f"unknown nullity method {method!r}")


def nullity_cross_checked(graph: SparseGraph, seed: int = 0) -> NullityResult:
    """Both routes; on disagreement retry the modular route with a second
    prime and return it (the modular answer is authoritative)."""
    exact = nullity(graph, "rank_mod_prime", seed=seed)
    approx = nullity(graph, "svd")
    if exact.nullity != approx.nullity:
        exact = nullity(graph, "rank_mod_prime", seed=seed, which_prime=1)
    return exact


# ---------------------------------------------------------------------------
# spectral densities near zero


def window_mass(eigs: np.ndarray, nullity_value: int, n: int, eps: float) -> float:
    """Average density of nonzero eigenvalues in [-eps, eps]."""
    if not eps > 0:
        raise DomainError(f"window half-width must be positive, got {eps}")
    if n == 0:
        return 0.0
    inside = int(np.count_nonzero(np.abs(np.asarray(eigs)) <= eps))
    return max(0, inside - nullity_value) / (n * 2.0 * eps)


def kesten_mckay_density(d: int, lam) -> np.ndarray:
    """Limiting spectral density of random d-regular graphs, d >= 2."""
    if d < 2:
        raise DomainError(f"regular-tree density needs degree >= 2, got {d}")
    lam = np.asarray(lam, dtype=float)
    edge = 2.0 * math.sqrt(d - 1.0)
    out = np.zeros_like(lam)
    inside = np.abs(lam) < edge
    li = lam[inside]
    out[inside] = d * np.sqrt(4.0 * (d - 1.0) - li * li) / (2.0 * math.pi * (d * d - li * li))
    return out if out.ndim else float(out)


@lru_cache(maxsize=8)
def _km_cdf_table(d: int):
    # lambda = 2 sqrt(d-1) sin(theta) turns the endpoint square root into
    # cos^2(theta); cumulative Simpson on 4000 panels, values at even nodes.
    # The integrand is written with d^2 - lambda^2 = (d-2)^2 + 4(d-1)cos^2,
    # so the d = 2 edge singularity cancels instead of hitting the density's
    # outside-support zero at the two endpoint nodes.
    edge = 2.0 * math.sqrt(d - 1.0)
    n_pts = 4001
    theta = np.linspace(-math.pi / 2.0, math.pi / 2.0, n_pts)
    lam = edge * np.sin(theta)
    cos2 = np.cos(theta) ** 2
    g = (4.0 * d * (d - 1.0) * cos2
         / (2.0 * math.pi * ((d - 2.0) ** 2 + 4.0 * (d - 1.0) * cos2)))
    h = theta[1] - theta[0]
    f = np.zeros((n_pts - 1) // 2 + 1)
    incr = (h / 3.0) * (g[0:-2:2] + 4.0 * g[1::2] + g[2::2])
    f[1:] = np.cumsum(incr)
    total = f[-1]
    if abs(total - 1.0) > 1e-9:
        raise NumericalError(f"density quadrature off by {abs(total - 1.0):.3g}")
    return lam[0::2], np.minimum(f / total, 1.0)


def kesten_mckay_cdf(d: int, x) -> np.ndarray:
    """CDF of the d-regular limiting density, exact endpoints."""
    if d < 2:
        raise DomainError(f"regular-tree density needs degree >= 2, got {d}")
    nodes, values = _km_cdf_table(d)
    x = np.asarray(x, dtype=float)
    out = np.interp(x, nodes, values, left=0.0, right=1.0)
    return out if out.ndim else float(out)


def empirical_cdf_distance(eigs: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a reference CDF.

    The reference may carry atoms (step discontinuities), so the sup is
    taken both at each distinct sample value and just below it; the left
    limit is probed a relative 1e-9 beneath the point, which is exact
    for steps located at sample values and negligible for Lipschitz
    references. Repeated eigenvalues are folded into one jump first,
    which keeps the distance at zero when a spectrum is compared with
    its own empirical CDF.
    """
    x = np.asarray(eigs, dtype=float)
    n = len(x)
    if n == 0:
        raise DomainError("empty sample")
    vals, counts = np.unique(x, return_counts=True)
    ecdf_hi = np.cumsum(counts) / n
    ecdf_lo = ecdf_hi - counts / n
    f_at = np.asarray(cdf(vals), dtype=float)
    left = vals - np.maximum(1e-300, 1e-9 * np.abs(vals))
    f_before = np.asarray(cdf(left), dtype=float)
    return float(max(np.max(np.abs(f_at - ecdf_hi)),
                     np.max(np.abs(f_before - ecdf_lo))))
