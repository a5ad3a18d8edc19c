"""Weighted cycle polynomials on complete graphs.

Evaluates the sum of edge-weight products over ``k``-cycles of ``K_n``,
maximises it over the weight simplex by pairwise exchange moves, checks the
inequality chain bounding its maximum by ``1/k^k``, and builds the blown-up
even cycle used for planar ``C_{2k}`` counts.
"""

from .certificates import certify_mu_bound, greedy_sequence, verify_lemma33
from .cycles import beta, beta_cycles, beta_via_identity, count_cycles, path_sum, path_sum_from
from .exchange import (
    OptimizerConfig,
    exchange_coefficients,
    multistart,
    optimal_split,
    optimize,
    stationarity_check,
)
from .planar import asymptotic_ratio, build_blowup, closed_form_count
from .weights import (
    SimpleGraph,
    WeightFunction,
    delete_edge,
    delete_vertices,
    new_weight_function,
    normalize,
    weighted_degree,
)

__all__ = [
    "SimpleGraph",
    "WeightFunction",
    "new_weight_function",
    "normalize",
    "weighted_degree",
    "delete_vertices",
    "delete_edge",
    "path_sum",
    "path_sum_from",
    "beta",
    "beta_cycles",
    "beta_via_identity",
    "count_cycles",
    "exchange_coefficients",
    "optimal_split",
    "optimize",
    "multistart",
    "OptimizerConfig",
    "stationarity_check",
    "greedy_sequence",
    "verify_lemma33",
    "certify_mu_bound",
    "build_blowup",
    "closed_form_count",
    "asymptotic_ratio",
]
