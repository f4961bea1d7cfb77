"""Spectra of sparse random graphs and their limiting trees.

The package answers one question two ways and makes the routes meet: how
much mass does the adjacency spectrum of a sparse graph carry at and near
zero. A closed-form route classifies a degree law through a variational
curve; a sampling route evolves cavity populations on the limiting tree;
a finite route measures exact kernel dimensions of sampled graphs.
"""

__version__ = "0.1.0"

from .backend import backend_name
from .degree_model import DegreeDistribution, OffspringDistribution
from .errors import (CapExceeded, ChildrenCapExceeded, Degenerate,
                     DegreeExceedsN, DomainError, InvalidPmf, NoConvergence,
                     NumericalError, ParseError, PoolNotConverged, UgwError,
                     ZeroMean)
from .graph_lab import (NullityResult, SparseGraph, SpectrumResult,
                        eigenvalues, empirical_cdf_distance,
                        kesten_mckay_cdf, kesten_mckay_density, nullity,
                        nullity_cross_checked, random_prime,
                        sample_config_model, sample_er, window_mass)
from .limit_theory import (TOLERANCES, CategoryProbabilities,
                           ClassificationReport, M, M_prime, M_second,
                           argmax_M, bg_atom, bg_locus,
                           category_probabilities, classify, solve_z_star,
                           z_hat_iteration)
from .tree_recursion import (AlphaBetaRun, BetaStarReport, CavityPool,
                             CondInvAlphaReport, SweepResult, SweepRow,
                             TransformEstimate, beta_star_estimate,
                             category_frequencies, classify_trend,
                             combined_category_frequencies,
                             conditional_inverse_alpha, estimate_transform,
                             evolve_alphabeta, make_alphabeta_pool,
                             make_stieltjes_pool, pd_step_alphabeta,
                             pd_step_stieltjes, pool_load, pool_save,
                             s_star_sweep)

__all__ = [name for name in dir() if not name.startswith("_")]
