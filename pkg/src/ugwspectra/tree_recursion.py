"""Population dynamics for the cavity recursions on random trees.

Two coupled populations are evolved: the resolvent samples s at spectral
parameter t > 0, and the tagged extended-real pairs (alpha, beta) that are
their t -> 0 limits. Evolving both under *identical* counter-RNG draws
(same child counts, same child picks, generation by generation) makes row
i of the two pools describe the same realised finite tree, which licenses
the per-sample subtraction

    s_star_i = s_i - alpha_i / t

in the sweep. A pairwise induction over the shared tree shows s >= alpha/t
at every plus node and s <= t*beta at every minus node (leaves satisfy
s = 1/t, alpha = 1 with equality), so the subtracted samples are
nonnegative and their fluctuations stay O(1) instead of O(1/t). The raw
expected-measure difference E[s] - atom/t has standard error ~ 1/(t sqrt N)
and drowns at small t; the coupled form estimates the same limit with the
atom fluctuation cancelled sample by sample.

Extended reals are tagged categories with finite payloads, never floating
infinities: Plus carries alpha in (0, 1], Minus carries beta in (0, inf),
Star carries nothing.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels, run_ranged
from .degree_model import DegreeDistribution, OffspringDistribution
from .errors import DomainError, NoConvergence, PoolNotConverged
from .rng import (DOM_BOOT, DOM_ESTIMATE, DOM_OFFSPRING, DOM_ROOT,
                  derive_key, uniforms_np)

PLUS = 0
MINUS = 1
STAR = 2

OFFSPRING_LAW = "OffspringLaw"
ROOT_LAW = "RootLaw"

_BOOT_RESAMPLES = 128
_STABILITY_TOL = 0.005
_STABILITY_WINDOW = 20


@dataclass(frozen=True)
class CavityPool:
    """Immutable snapshot of one population generation.

    t > 0 pools carry ``s``; the t = 0 pools carry ``categories`` and
    ``payloads``. ``freq_history`` accumulates the per-generation category
    frequencies of the t = 0 lineage so estimators can audit convergence.
    """

    law_tag: str
    t: float
    generation: int
    seed: int
    s: np.ndarray | None = None
    categories: np.ndarray | None = None
    payloads: np.ndarray | None = None
    freq_history: tuple = ()

    @property
    def size(self) -> int:
        return len(self.s) if self.s is not None else len(self.categories)

    def validate(self) -> None:
        """Assert the structural invariants of the snapshot."""
        if self.t > 0:
            if not np.all((self.s > 0) & (self.s <= 1.0 / self.t)):
                raise AssertionError("resolvent samples must lie in (0, 1/t]")
        else:
            c, p = self.categories, self.payloads
            if not np.all((c == PLUS) | (c == MINUS) | (c == STAR)):
                raise AssertionError("unknown category tag")
            plus, minus, star = c == PLUS, c == MINUS, c == STAR
            ok = (
                np.all((p[plus] > 0) & (p[plus] <= 1.0))
                and np.all((p[minus] > 0) & np.isfinite(p[minus]))
                and np.all(p[star] == 0.0)
            )
            if not ok:
                raise AssertionError("payload outside its category's range")


@dataclass(frozen=True)
class TransformEstimate:
    e_root: float
    e_offspring: float
    stderr_root: float
    stderr_offspring: float


@dataclass(frozen=True)
class SweepRow:
    t: float
    mean_s_root: float
    mean_s_offspring: float
    t_times_mean: float
    s_star_mean: float
    stderr_root: float
    stderr_offspring: float
    stderr_s_star: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    trend: str


@dataclass(frozen=True)
class AlphaBetaRun:
    """Converged pair of consecutive generations of the t = 0 dynamics.

    The exact finite-depth dynamics cannot create Star samples (a Star
    needs a Star child), so above the transition the population settles
    into a two-generation cycle whose phases bracket the limiting triple.
    ``combined`` takes the minimum Plus and Minus frequency across the two
    phases, which converges to the closed-form triple including its Star
    mass; for laws below the transition both phases agree and the minimum
    is the ordinary frequency.

    ``pool_mid`` is an even-phase snapshot from halfway through the run,
    kept as the depth reference for divergence detection: a functional
    whose defining expectation is infinite keeps growing with generation
    instead of settling.
    """

    pool: CavityPool
    prev_pool: CavityPool
    converged: bool
    combined: tuple
    pool_mid: CavityPool | None = None

    @property
    def pool_even(self) -> CavityPool:
        return self.pool if self.pool.generation % 2 == 0 else self.prev_pool

    @property
    def pool_odd(self) -> CavityPool:
        return self.pool if self.pool.generation % 2 == 1 else self.prev_pool


@dataclass(frozen=True)
class BetaStarReport:
    estimate: float
    diverging: bool
    quantiles: dict
    tail_index: float | None
    n_draws: int
    batch_means: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class CondInvAlphaReport:
    estimate: float
    diverging: bool
    n_plus: int


# ---------------------------------------------------------------------------
# pool construction and single steps


def make_stieltjes_pool(pool_size: int, t: float, seed: int) -> CavityPool:
    """Leaf initial condition: every sample at the boundary value 1/t."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return CavityPool(OFFSPRING_LAW, float(t), 0, seed, s=np.full(pool_size, 1.0 / t))


def make_alphabeta_pool(pool_size: int, seed: int) -> CavityPool:
    """Leaf initial condition: all Plus with alpha = 1."""
    return CavityPool(
        OFFSPRING_LAW, 0.0, 0, seed,
        categories=np.zeros(pool_size, dtype=np.uint8),
        payloads=np.ones(pool_size),
    )


def _freqs(categories: np.ndarray) -> tuple:
    n = len(categories)
    f_plus = float(np.count_nonzero(categories == PLUS)) / n
    f_minus = float(np.count_nonzero(categories == MINUS)) / n
    return (f_plus, f_minus, max(0.0, 1.0 - f_plus - f_minus))


def pd_step_stieltjes(pool: CavityPool, offspring: OffspringDistribution,
                      threads: int = 1) -> CavityPool:
    if not pool.t > 0:
        raise DomainError("pd_step_stieltjes needs a t > 0 pool")
    n = pool.size
    key = derive_key(pool.seed, DOM_OFFSPRING, pool.generation + 1)
    out = np.empty(n)
    run_ranged(kernels.stieltjes_step, n, threads,
               pool.s, pool.t, offspring.cdf_table(), key, out)
    return CavityPool(pool.law_tag, pool.t, pool.generation + 1, pool.seed, s=out)


def pd_step_alphabeta(pool: CavityPool, offspring: OffspringDistribution,
                      threads: int = 1) -> CavityPool:
    if pool.t != 0.0:
        raise DomainError("pd_step_alphabeta needs the t = 0 pool")
    n = pool.size
    key = derive_key(pool.seed, DOM_OFFSPRING, pool.generation + 1)
    cat_out = np.empty(n, dtype=np.uint8)
    pay_out = np.empty(n)
    run_ranged(kernels.alphabeta_step, n, threads,
               pool.categories, pool.payloads, offspring.cdf_table(), key, cat_out, pay_out)
    return CavityPool(
        pool.law_tag, 0.0, pool.generation + 1, pool.seed,
        categories=cat_out, payloads=pay_out,
        freq_history=pool.freq_history + (_freqs(cat_out),),
    )


def category_frequencies(pool: CavityPool) -> tuple:
    """Empirical (f_plus, f_minus, f_star) of one snapshot."""
    if pool.t != 0.0:
        raise DomainError("category frequencies are defined for the t = 0 pool")
    return _freqs(pool.categories)


def combined_category_frequencies(pool_a: CavityPool, pool_b: CavityPool) -> tuple:
    """Phase-resolved triple from two consecutive generations.

    Star mass is never materialised by the finite-depth dynamics; it shows
    up as the excess of each phase over the persistent Plus and Minus
    fractions, so take the minimum of each across the two phases.
    """
    fa, fb = _freqs(pool_a.categories), _freqs(pool_b.categories)
    f_plus = min(fa[0], fb[0])
    f_minus = min(fa[1], fb[1])
    return (f_plus, f_minus, max(0.0, 1.0 - f_plus - f_minus))


# ---------------------------------------------------------------------------
# bootstrap and convergence plumbing


def _bootstrap_stderr(x: np.ndarray, seed: int, salt: int) -> float:
    if len(x) < 2 or float(np.ptp(x)) == 0.0:
        return 0.0
    key = derive_key(seed, DOM_BOOT, salt)
    n = len(x)
    means = np.empty(_BOOT_RESAMPLES)
    idx0 = np.arange(n, dtype=np.uint64)
    for b in range(_BOOT_RESAMPLES):
        u = uniforms_np(key, idx0, b)
        means[b] = x[(u * n).astype(np.int64)].mean()
    return float(means.std(ddof=1))


def _check_drift(history: list, stderr: float, label: str) -> None:
    """Monotone-drift convergence gate over the trailing fifth of a run."""
    w = max(2, len(history) // 5)
    window = history[-w:]
    diffs = np.diff(window)
    monotone = bool(np.all(diffs >= 0) or np.all(diffs <= 0))
    drift = abs(window[-1] - window[0])
    if monotone and drift > 3.0 * stderr:
        raise NoConvergence(
            f"{label}: pool mean drifted monotonically by {drift:.3g} "
            f"(> 3 x stderr = {3 * stderr:.3g}) over the last {w} sweeps"
        )


# ---------------------------------------------------------------------------
# transform estimation and the diagnostic sweep


def estimate_transform(dist: DegreeDistribution, t: float, pool_size: int = 100_000,
                       iters: int = 300, seed: int = 0, threads: int = 1) -> TransformEstimate:
    """Mean resolvent sample under both laws at parameter t.

    Runs ``iters`` offspring sweeps from the leaf initial condition, then
    one root pass with the degree law. Bootstrap standard errors; raises
    NoConvergence on monotone tail drift beyond three standard errors.
    """
    _check_pd_args(t, pool_size, iters)
    if dist.mean() == 0.0:
        return TransformEstimate(1.0 / t, 1.0 / t, 0.0, 0.0)
    off = dist.size_biased()
    cdf_off = off.cdf_table()
    s = np.full(pool_size, 1.0 / t)
    out = np.empty(pool_size)
    history = []
    for g in range(1, iters + 1):
        key = derive_key(seed, DOM_OFFSPRING, g)
        run_ranged(kernels.stieltjes_step, pool_size, threads, s, t, cdf_off, key, out)
        s, out = out, s
        history.append(float(s.mean()))
    stderr_off = _bootstrap_stderr(s, seed, 1)
    _check_drift(history, stderr_off, f"{dist.describe()} at t={t:g}")

    key_root = derive_key(seed, DOM_ROOT, iters + 1)
    s_root = np.empty(pool_size)
    run_ranged(kernels.stieltjes_step, pool_size, threads, s, t, dist.cdf_table(), key_root, s_root)
    return TransformEstimate(
        e_root=float(s_root.mean()),
        e_offspring=history[-1],
        stderr_root=_bootstrap_stderr(s_root, seed, 2),
        stderr_offspring=stderr_off,
    )


def classify_trend(values) -> str:
    """Trend label for a sweep of s_star means ordered by decreasing t.

    DecayingToZero when each of the last three steps drops to at most 0.6
    of its predecessor; Plateau when the final step sits within [0.8,
    1.25] of the one before; Inconclusive otherwise. Decay is tested
    first so an identically-zero tail is reported as decay.
    """
    v = [float(x) for x in values]
    if len(v) >= 2:
        steps = min(3, len(v) - 1)
        tail = v[-(steps + 1):]
        if all(tail[i + 1] <= 0.6 * tail[i] for i in range(steps)):
            return "DecayingToZero"
        if v[-2] > 0 and 0.8 <= v[-1] / v[-2] <= 1.25:
            return "Plateau"
    return "Inconclusive"


def _check_pd_args(t, pool_size, iters):
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if pool_size < 10**3:
        raise DomainError(f"pool size must be at least 1000, got {pool_size}")
    if iters < 50:
        raise DomainError(f"iteration count must be at least 50, got {iters}")


def s_star_sweep(dist: DegreeDistribution, t_grid, pool_size: int = 100_000,
                 iters: int = 300, seed: int = 0, threads: int = 1) -> SweepResult:
    """Atom-subtracted transform along a decreasing t grid.

    All t values and the t = 0 category lineage share one stream of
    counter draws, so every t sees the same realised trees and the root
    alpha of tree i cancels its own atom contribution exactly. The
    reported s_star_mean is the mean of those per-sample differences,
    clipped at zero where cancellation leaves float dust.

    Every row advances the same ``iters`` generations on the shared
    stream. Rows with t*iters well below 1 are still inside their depth
    transient, but paired draws keep adjacent rows tightly correlated,
    so the trailing-ratio trend is stable even where the absolute level
    has not fully settled; deep-t rows need iters of order 1/t to reach
    their resolvent limit (see the fixed-point depth notes in the docs).
    """
    ts = [float(x) for x in t_grid]
    if len(ts) == 0 or any(b >= a for a, b in zip(ts, ts[1:])):
        raise DomainError("t grid must be strictly decreasing")
    if min(ts) < 1e-5:
        raise DomainError(f"t grid floor is 1e-5, got {min(ts)}")
    _check_pd_args(min(ts), pool_size, iters)

    if dist.mean() == 0.0:
        rows = tuple(
            SweepRow(t, 1.0 / t, 1.0 / t, 1.0, 0.0, 0.0, 0.0, 0.0) for t in ts
        )
        return SweepResult(rows, classify_trend([0.0] * len(ts)))

    off = dist.size_biased()
    cdf_off = off.cdf_table()
    cdf_root = dist.cdf_table()

    pools = [np.full(pool_size, 1.0 / t) for t in ts]
    scratch = np.empty(pool_size)
    cats = np.zeros(pool_size, dtype=np.uint8)
    pays = np.ones(pool_size)
    cat_s = np.empty(pool_size, dtype=np.uint8)
    pay_s = np.empty(pool_size)
    histories = [[] for _ in ts]

    for g in range(1, iters + 1):
        key = derive_key(seed, DOM_OFFSPRING, g)
        for m, t in enumerate(ts):
            run_ranged(kernels.stieltjes_step, pool_size, threads,
                       pools[m], t, cdf_off, key, scratch)
            pools[m], scratch = scratch.copy(), pools[m]
            histories[m].append(float(pools[m].mean()))
        run_ranged(kernels.alphabeta_step, pool_size, threads,
                   cats, pays, cdf_off, key, cat_s, pay_s)
        cats, cat_s = cat_s, cats
        pays, pay_s = pay_s, pays

    key_root = derive_key(seed, DOM_ROOT, iters + 1)
    cat_r = np.empty(pool_size, dtype=np.uint8)
    pay_r = np.empty(pool_size)
    run_ranged(kernels.alphabeta_step, pool_size, threads,
               cats, pays, cdf_root, key_root, cat_r, pay_r)
    alpha_root = np.where(cat_r == PLUS, pay_r, 0.0)

    rows = []
    star_means = []
    for m, t in enumerate(ts):
        stderr_off = _bootstrap_stderr(pools[m], seed, 10 + 3 * m)
        _check_drift(histories[m], stderr_off, f"{dist.describe()} at t={t:g}")
        s_root = np.empty(pool_size)
        run_ranged(kernels.stieltjes_step, pool_size, threads,
                   pools[m], t, cdf_root, key_root, s_root)
        s_star = np.maximum(s_root - alpha_root / t, 0.0)
        mean_root = float(s_root.mean())
        star_mean = float(s_star.mean())
        rows.append(SweepRow(
            t=t,
            mean_s_root=mean_root,
            mean_s_offspring=histories[m][-1],
            t_times_mean=t * mean_root,
            s_star_mean=star_mean,
            stderr_root=_bootstrap_stderr(s_root, seed, 11 + 3 * m),
            stderr_offspring=stderr_off,
            stderr_s_star=_bootstrap_stderr(s_star, seed, 12 + 3 * m),
        ))
        star_means.append(star_mean)
    return SweepResult(tuple(rows), classify_trend(star_means))


# ---------------------------------------------------------------------------
# t = 0 dynamics: driver, convergence audit, and the two tail estimators


def evolve_alphabeta(dist: DegreeDistribution, pool_size: int = 100_000,
                     iters: int = 400, seed: int = 0, threads: int = 1) -> AlphaBetaRun:
    """Run the t = 0 population and keep the final two generations.

    The default depth is set so the halfway snapshot sits around
    generation 200: laws just below the transition equilibrate their tail
    functionals algebraically, and a shallower depth reference would read
    that transient as divergence.
    """
    if pool_size < 10**3:
        raise DomainError(f"pool size must be at least 1000, got {pool_size}")
    pool = make_alphabeta_pool(pool_size, seed)
    if dist.mean() == 0.0:
        return AlphaBetaRun(pool, pool, True, _freqs(pool.categories), pool)
    off = dist.size_biased()
    mid_gen = max(2, (iters // 4) * 2)  # even phase, half depth
    mid = None
    prev = pool
    for _ in range(iters):
        prev, pool = pool, pd_step_alphabeta(pool, off, threads=threads)
        if pool.generation == mid_gen:
            mid = pool
    return AlphaBetaRun(
        pool, prev, _history_stable(pool.freq_history),
        combined_category_frequencies(pool, prev),
        mid,
    )


def _history_stable(history, tol: float = _STABILITY_TOL,
                    window: int = _STABILITY_WINDOW) -> bool:
    """Stability of the category frequencies over the trailing window.

    The Star-free dynamics settles into a two-generation cycle above the
    transition, so each parity is audited separately: its rows in the
    window are split into two halves and the half means must agree within
    tol. Half means rather than row pairs, because a single row pair
    fluctuates at the full 1/sqrt(pool) scale and would flag noise.
    """
    if len(history) < window + 2:
        return False
    h = np.asarray(history[-window:])
    for parity in (0, 1):
        rows = h[parity::2]
        k = len(rows) // 2
        if k == 0:
            return False
        drift = np.abs(rows[k:].mean(axis=0) - rows[:k].mean(axis=0))
        if float(drift.max()) > tol:
            return False
    return True


def _require_converged(dist: DegreeDistribution, pool: CavityPool) -> None:
    if dist.mean() == 0.0:
        return  # no offspring steps exist; the leaf pool is the fixed point
    if not _history_stable(pool.freq_history):
        raise PoolNotConverged(
            "category frequencies moved by more than "
            f"{_STABILITY_TOL} over the last {_STABILITY_WINDOW} generations"
        )


def _root_draw_stats(cats: np.ndarray, pays: np.ndarray, law_cdf: np.ndarray,
                     key: int, n_draws: int):
    """Vectorised root draws: per draw the child count, Plus count, Plus
    alpha sum, Minus beta sum, and whether a Star child appeared."""
    n_src = len(cats)
    idx = np.arange(n_draws, dtype=np.uint64)
    k = np.searchsorted(law_cdf, uniforms_np(key, idx, 0), side="right")
    n_plus = np.zeros(n_draws, dtype=np.int64)
    sum_a = np.zeros(n_draws)
    sum_b = np.zeros(n_draws)
    star = np.zeros(n_draws, dtype=bool)
    for d in range(int(k.max()) if n_draws else 0):
        sel = np.nonzero(k > d)[0]
        u = uniforms_np(key, idx[sel], 1 + d)
        j = (u * n_src).astype(np.int64)
        c = cats[j]
        p = pays[j]
        pm = c == PLUS
        mm = c == MINUS
        n_plus[sel[pm]] += 1
        sum_a[sel[pm]] += p[pm]
        sum_b[sel[mm]] += p[mm]
        star[sel[c == STAR]] = True
    return k, n_plus, sum_a, sum_b, star


def _tail_functional_draws(dist: DegreeDistribution, pool: CavityPool,
                           n: int, seed: int) -> np.ndarray:
    """Per root draw with degree from ``dist`` and children from ``pool``:

        y = 1[alpha_root = 0] * beta_root
          + 1[N_plus >= 2] * beta_root
          + 1[N_plus >= 2] * (sum of beta over non-Plus children)
                           / (sum of alpha over Plus children)

    with beta_root = 1 / (sum of alpha over Plus children). A Star child
    carries beta = infinity, which propagates into the affected terms.
    """
    key = derive_key(seed, DOM_ESTIMATE, pool.generation + 1)
    _, n_plus, sum_a, sum_b, star = _root_draw_stats(
        pool.categories, pool.payloads, dist.cdf_table(), key, n)
    with np.errstate(divide="ignore"):
        beta_root = np.where(n_plus >= 1, 1.0 / np.where(n_plus >= 1, sum_a, 1.0), 0.0)
    t1 = np.where(n_plus >= 1, beta_root, np.where(star, np.inf, 0.0))
    t2 = np.where(n_plus >= 2, beta_root, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(n_plus >= 2, sum_b / np.where(n_plus >= 1, sum_a, 1.0), 0.0)
    t3 = np.where((n_plus >= 2) & star, np.inf, ratio)
    return t1 + t2 + t3


# measured depth-doubling ratios: convergent laws 0.86..1.01 (slow
# algebraic equilibration near the transition included), divergent laws
# 1.99..2.51; the midpoint 1.5 separates them with margin on both sides
_GROWTH_FACTOR = 1.5


def beta_star_estimate(dist: DegreeDistribution, pool: CavityPool,
                       n_root_draws: int = 200_000, seed: int = 0,
                       ref_pool: CavityPool | None = None) -> BetaStarReport:
    """Monte Carlo of the three-term tail functional at the root.

    The estimate is a median of 32 batch means. ``diverging`` is raised
    by either signature of an infinite expectation at finite sample size:
    the top percentile of draws carrying most of the total, or the
    estimate still growing with generation depth, measured against
    ``ref_pool`` (an earlier even-phase snapshot such as
    AlphaBetaRun.pool_mid). Pass the reference pool whenever available;
    the depth test is what catches divergence that accrues through
    vanishing alphas rather than through one fat tail.
    """
    _require_converged(dist, pool)
    if pool.generation % 2 != 0:
        raise DomainError(
            "beta_star_estimate expects the even-phase pool "
            "(pass AlphaBetaRun.pool_even)"
        )
    n = 32 * max(1, math.ceil(n_root_draws / 32))
    y = _tail_functional_draws(dist, pool, n, seed)

    batches = y.reshape(32, -1).mean(axis=1)
    estimate = float(np.median(batches))
    total = float(y.sum())
    k_top = max(1, n // 100)
    top = float(np.sort(y)[-k_top:].sum())
    diverging = bool(not math.isfinite(total) or (total > 0 and top > 0.5 * total))

    if ref_pool is not None and not diverging:
        if ref_pool.generation % 2 != 0:
            raise DomainError("the reference pool must also be even-phase")
        if ref_pool.generation < pool.generation:
            y_ref = _tail_functional_draws(dist, ref_pool, n, seed)
            est_ref = float(np.median(y_ref.reshape(32, -1).mean(axis=1)))
            if est_ref > 0 and estimate > _GROWTH_FACTOR * est_ref:
                diverging = True

    # Hill exponent from the 32 batch maxima; below 1 means infinite mean
    batch_max = y.reshape(32, -1).max(axis=1)
    finite_max = np.sort(batch_max[np.isfinite(batch_max)])[::-1]
    tail_index = None
    kk = min(16, len(finite_max) - 1)
    if kk >= 4 and finite_max[kk] > 0:
        logs = np.log(finite_max[:kk] / finite_max[kk])
        if logs.sum() > 0:
            tail_index = float(kk / logs.sum())

    qs = {f"q{q}": float(np.quantile(y, q)) for q in (0.5, 0.9, 0.99, 0.999)}
    return BetaStarReport(estimate, diverging, qs, tail_index, n, tuple(batches))


def conditional_inverse_alpha(pool: CavityPool,
                              dist: DegreeDistribution | None = None) -> CondInvAlphaReport:
    """Median-of-means of 1/alpha over the Plus part of the pool, with the
    same top-percentile divergence flag as the tail estimator."""
    if dist is not None:
        _require_converged(dist, pool)
    elif not _history_stable(pool.freq_history) and pool.generation > 0:
        raise PoolNotConverged("pool history is not stable at lag two")
    alpha = pool.payloads[pool.categories == PLUS]
    if len(alpha) == 0:
        raise PoolNotConverged("no Plus samples to condition on")
    x = 1.0 / alpha
    n_b = min(32, len(x))
    cut = (len(x) // n_b) * n_b
    batches = x[:cut].reshape(n_b, -1).mean(axis=1)
    k_top = max(1, len(x) // 100)
    top = float(np.sort(x)[-k_top:].sum())
    total = float(x.sum())
    diverging = bool(total > 0 and top > 0.5 * total)
    return CondInvAlphaReport(float(np.median(batches)), diverging, len(x))


# ---------------------------------------------------------------------------
# snapshot serialisation

_MAGIC = 0x01


def pool_save(pool: CavityPool, path: str) -> None:
    """Binary snapshot: version byte, flags, N, t, generation, seed, samples.

    Convergence history is diagnostic state and is not serialised; a
    resumed lineage rebuilds its own.
    """
    mode = 0 if pool.t > 0 else 1
    law = 0 if pool.law_tag == OFFSPRING_LAW else 1
    head = struct.pack("<BBQdQQ", _MAGIC, mode | (law << 1), pool.size,
                       pool.t, pool.generation, pool.seed)
    with open(path, "wb") as fh:
        fh.write(head)
        if mode == 0:
            fh.write(pool.s.tobytes())
        else:
            fh.write(pool.categories.tobytes())
            fh.write(pool.payloads.tobytes())


def pool_load(path: str) -> CavityPool:
    with open(path, "rb") as fh:
        head = fh.read(struct.calcsize("<BBQdQQ"))
        magic, flags, n, t, generation, seed = struct.unpack("<BBQdQQ", head)
        if magic != _MAGIC:
            raise DomainError(f"unknown snapshot version byte {magic}")
        law_tag = ROOT_LAW if (flags >> 1) & 1 else OFFSPRING_LAW
        if flags & 1:
            cats = np.frombuffer(fh.read(n), dtype=np.uint8).copy()
            pays = np.frombuffer(fh.read(8 * n), dtype=np.float64).copy()
            return CavityPool(law_tag, 0.0, generation, seed,
                              categories=cats, payloads=pays)
        s = np.frombuffer(fh.read(8 * n), dtype=np.float64).copy()
        return CavityPool(law_tag, t, generation, seed, s=s)
