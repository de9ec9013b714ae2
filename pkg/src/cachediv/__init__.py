"""Opportunistic one-hop scheduling in cache-enabled wireless networks.

Monte Carlo simulator for the random-connections fading model: Pareto
channel powers, uniform random cache placement, a nested-prefix activation
scheduler, a brute-force optimal baseline for small networks, closed-form
order-statistics results and a seeded experiment harness.
"""

from cachediv.channel import (
    generate_matrix,
    pareto_cdf,
    pareto_mean,
    pareto_pdf,
    pareto_quantile,
)
from cachediv.placement import CacheConfig, CachePlacement, coverage, place_caches, resolve_cache_size
from cachediv.scheduler import (
    LinkBudget,
    TransmissionStrategy,
    TrialOutcome,
    best_destinations,
    evaluate_throughput,
    run_algorithm1,
    sinr,
)
from cachediv.streams import derive_rng

__version__ = "0.1.0"

__all__ = [
    "CacheConfig",
    "CachePlacement",
    "LinkBudget",
    "TransmissionStrategy",
    "TrialOutcome",
    "best_destinations",
    "coverage",
    "derive_rng",
    "evaluate_throughput",
    "generate_matrix",
    "pareto_cdf",
    "pareto_mean",
    "pareto_pdf",
    "pareto_quantile",
    "place_caches",
    "resolve_cache_size",
    "run_algorithm1",
    "sinr",
]
