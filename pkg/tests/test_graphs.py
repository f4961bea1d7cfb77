"""Finite-graph laboratory.

Claims covered:
    - the independent-edge sampler hits forced and empty cases and the
      right edge density at scale
    - stub pairing respects degrees, repairs odd sums, erases loops and
      doubles on request, and rejects infeasible degree draws
    - spectra of hand graphs match closed forms; bipartite samples have
      symmetric spectra; trace and Frobenius residuals stay tiny
    - nullity: peeling plus modular rank equals the rational-elimination
      oracle and the singular-value count on a hundred small graphs
    - window masses, the regular-tree density, its CDF, and the KS
      distance agree with quadrature and hand values
"""

import math

import numpy as np
import pytest
from pytest import approx

import ugwspectra as u
from ugwspectra.graph_lab import _graph_from_pairs, _peel

import oracles


def law(text):
    return u.DegreeDistribution.parse(text)


# -- independent-edge sampling ------------------------------------------------

def test_er_zero_mean_is_empty():
    g = u.sample_er(10, 0.0, seed=0)
    assert g.edge_count == 0
    assert all(len(a) == 0 for a in g.adjacency)


def test_er_forced_single_edge():
    g = u.sample_er(2, 2.0, seed=0)
    assert g.edge_count == 1
    assert g.adjacency == ((1,), (0,))


def test_er_edge_density_at_scale():
    g = u.sample_er(10_000, 2.0, seed=3)
    assert g.edge_count / g.n == approx(1.0, abs=0.05)
    assert g.simple


def test_er_is_symmetric_and_deterministic():
    a = u.sample_er(200, 1.5, seed=9)
    b = u.sample_er(200, 1.5, seed=9)
    assert a.adjacency == b.adjacency
    for v, nbrs in enumerate(a.adjacency):
        for w in nbrs:
            assert v in a.adjacency[w]


def test_er_rejects_bad_mean():
    with pytest.raises(u.DomainError):
        u.sample_er(10, -0.5, seed=0)
    with pytest.raises(u.DomainError):
        u.sample_er(10, 11.0, seed=0)


# -- stub pairing ----------------------------------------------------------------

def test_config_dirac0_empty():
    g = u.sample_config_model(8, law("dirac:0"), seed=0)
    assert g.edge_count == 0


def test_config_dirac1_perfect_matching():
    g = u.sample_config_model(10, law("dirac:1"), seed=2)
    assert g.edge_count == 5
    assert g.simple
    degs = [len(a) for a in g.adjacency]
    assert degs == [1] * 10


def test_config_dirac3_regular():
    g = u.sample_config_model(500, law("dirac:3"), seed=4)
    assert sum(len(a) for a in g.adjacency) == 1500
    simple = u.sample_config_model(500, law("dirac:3"), seed=4, erased=True)
    assert simple.simple
    assert max(len(a) for a in simple.adjacency) <= 3


def test_config_repairs_odd_degree_sum():
    # dirac:3 on odd n forces a redraw of the last degree, which cannot
    # succeed for a constant odd law, so the sampler must raise
    with pytest.raises(u.DomainError):
        u.sample_config_model(9, law("dirac:3"), seed=0)
    # a two-point law can always repair
    g = u.sample_config_model(9, law("pmf:1=0.5,2=0.5"), seed=0)
    assert sum(len(a) for a in g.adjacency) % 2 == 0


def test_config_rejects_degree_at_n():
    # even stub total, but degree 4 cannot fit in a 4-vertex simple graph
    with pytest.raises(u.DegreeExceedsN):
        u.sample_config_model(4, law("dirac:4"), seed=0)


# -- spectra -----------------------------------------------------------------------

def test_spectrum_path3():
    g = _graph_from_pairs(3, [(0, 1), (1, 2)], True)
    ev = u.eigenvalues(g).eigenvalues
    assert ev == approx([-math.sqrt(2), 0.0, math.sqrt(2)], abs=1e-12)


def test_spectrum_single_edge():
    g = _graph_from_pairs(2, [(0, 1)], True)
    assert u.eigenvalues(g).eigenvalues == approx([-1.0, 1.0], abs=1e-14)


def test_spectrum_star_k14():
    g = _graph_from_pairs(5, [(0, i) for i in range(1, 5)], True)
    assert u.eigenvalues(g).eigenvalues == approx([-2, 0, 0, 0, 2], abs=1e-12)
    direct = np.linalg.eigvalsh(oracles.star_adjacency(4))
    assert u.eigenvalues(g).eigenvalues == approx(list(direct), abs=1e-12)


def test_spectrum_cap():
    with pytest.raises(u.CapExceeded):
        u.eigenvalues(u.sample_er(5000, 1.0, seed=0))


def test_spectrum_residual_and_symmetry():
    g = u.sample_config_model(300, law("dirac:1"), seed=1)
    res = u.eigenvalues(g)
    assert res.solver_residual <= 1e-10
    # disjoint edges are bipartite: spectrum symmetric under negation
    ev = np.sort(res.eigenvalues)
    assert np.allclose(ev, -ev[::-1], atol=1e-8)


def test_er_tree_regime_spectrum_symmetric():
    g = u.sample_er(60, 0.8, seed=5)
    kernel, rank, core = _peel(g)
    if not core:  # forest: bipartite, symmetric spectrum
        ev = np.sort(u.eigenvalues(g).eigenvalues)
        assert np.allclose(ev, -ev[::-1], atol=1e-8)


# -- nullity ------------------------------------------------------------------------

def test_nullity_path3_and_empty():
    g = _graph_from_pairs(3, [(0, 1), (1, 2)], True)
    assert u.nullity(g).nullity == 1
    empty = _graph_from_pairs(7, [], True)
    assert u.nullity(empty).nullity == 7
    assert u.nullity(empty, method="svd").nullity == 7


def test_nullity_methods_agree_on_hundred_graphs():
    for seed in range(100):
        n = 20 + (seed * 7) % 180
        c = 0.5 + (seed % 5) * 0.5
        g = u.sample_er(n, c, seed=seed)
        a = u.nullity(g, method="rank_mod_prime", seed=seed).nullity
        b = u.nullity(g, method="svd").nullity
        assert a == b, f"seed {seed}: {a} != {b}"


def test_nullity_matches_rational_elimination():
    for seed in (0, 1, 2, 3, 4):
        g = u.sample_er(40, 1.5, seed=seed)
        m = g.adjacency_matrix()
        want = g.n - oracles.rational_rank(m.astype(np.int64))
        got = u.nullity(g, method="rank_mod_prime", seed=seed).nullity
        assert got == want


def test_nullity_cross_checked_returns_modular():
    g = u.sample_er(100, 1.0, seed=3)
    res = u.nullity_cross_checked(g, seed=3)
    assert res.method.startswith("RankModPrime(")


def test_peel_conserves_vertices():
    g = u.sample_er(300, 2.5, seed=6)
    kernel, rank, core = _peel(g)
    assert kernel + rank + len(core) == g.n
    assert rank % 2 == 0


def test_random_prime_is_prime_and_stable():
    p = u.random_prime(0)
    q = u.random_prime(0)
    assert p == q
    assert p > 2 ** 60
    assert p != u.random_prime(0, which=1)
    for cand in (u.random_prime(s) for s in range(5)):
        for d in range(2, 2000):
            assert cand % d != 0


# -- window masses and the regular-tree law -------------------------------------------

def test_window_mass_empty_graph_zero():
    g = _graph_from_pairs(5, [], True)
    ev = u.eigenvalues(g).eigenvalues
    nul = u.nullity(g).nullity
    for eps in (0.5, 0.1, 0.01):
        assert u.window_mass(ev, nul, g.n, eps) == 0.0


def test_window_mass_subtracts_kernel_only():
    eigs = np.array([-0.5, -0.05, 0.0, 0.0, 0.05, 0.5])
    assert u.window_mass(eigs, 2, 6, 0.1) == approx(2 / (6 * 0.2))


def test_window_mass_monotone_on_subcritical_ensemble():
    # mass in shrinking windows decreases when the verdict side says thin
    masses = {eps: [] for eps in (0.4, 0.2, 0.1, 0.05)}
    for seed in range(3):
        g = u.sample_er(1500, 2.0, seed=seed)
        ev = u.eigenvalues(g).eigenvalues
        nul = u.nullity(g, seed=seed).nullity
        for eps in masses:
            masses[eps].append(u.window_mass(ev, nul, g.n, eps))
    means = [float(np.mean(masses[eps])) for eps in (0.4, 0.2, 0.1, 0.05)]
    assert all(a >= b - 1e-9 for a, b in zip(means, means[1:]))


def test_window_mass_separates_phases():
    vals = {}
    for c in (2.0, 3.0):
        g = u.sample_er(4000, c, seed=1)
        ev = u.eigenvalues(g).eigenvalues
        nul = u.nullity(g, seed=1).nullity
        vals[c] = u.window_mass(ev, nul, g.n, 0.1)
    assert vals[3.0] > 3.0 * vals[2.0]


def test_km_density_values():
    assert u.kesten_mckay_density(3, 0.0) == approx(oracles.KM3_AT_ZERO, rel=1e-12)
    assert u.kesten_mckay_density(3, 3.0) == 0.0
    assert u.kesten_mckay_density(2, 0.0) == approx(oracles.KM2_AT_ZERO, rel=1e-12)
    with pytest.raises(u.DomainError):
        u.kesten_mckay_density(1, 0.0)


def test_km_density_matches_quadrature_normalisation():
    for d in (2, 3, 4):
        edge = 2 * math.sqrt(d - 1)
        val, _ = __import__("scipy.integrate", fromlist=["quad"]).quad(
            lambda x: oracles.km_density(d, x), -edge, edge, limit=400)
        assert val == approx(1.0, abs=1e-8)


def test_km_cdf_against_quadrature():
    for x in (-2.0, -0.7, 0.0, 0.3, 1.9):
        assert u.kesten_mckay_cdf(3, np.array([x]))[0] == approx(
            oracles.km_cdf_quad(3, x), abs=1e-6)
    assert u.kesten_mckay_cdf(3, np.array([0.0]))[0] == approx(0.5, abs=1e-9)


def test_ks_distance_trivia():
    eigs = np.array([-1.0, -1.0, 1.0, 1.0])
    def own(xq):
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        return np.searchsorted(np.sort(eigs), xq, side="right") / len(eigs)
    assert u.empirical_cdf_distance(eigs, own) == 0.0

    edge = _graph_from_pairs(2, [(0, 1)], True)
    ev = u.eigenvalues(edge).eigenvalues
    def half_half(xq):
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        return np.where(xq < -1, 0.0, np.where(xq < 1, 0.5, 1.0))
    assert u.empirical_cdf_distance(ev, half_half) == 0.0


def test_ks_distance_regular_sample():
    g = u.sample_config_model(2000, law("dirac:3"), seed=11, erased=True)
    ev = u.eigenvalues(g).eigenvalues
    ks = u.empirical_cdf_distance(ev, lambda x: u.kesten_mckay_cdf(3, x))
    assert ks <= 0.05
