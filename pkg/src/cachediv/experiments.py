"""Monte Carlo harness: independent realizations, sweeps over ``n`` and
log-log fits of the throughput scaling exponent.

Every trial owns a random stream keyed by ``(master_seed, n, k or m,
alpha, trial)``. Aggregates are reduced in trial-index order, so serial
and process-parallel runs give bit-identical results, and adding points
to a sweep never perturbs existing ones. ``beta`` and ``noise`` are not
part of the key: two runs that differ only in the link budget see the
same channel and cache realizations.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from cachediv.channel import check_alpha, generate_matrix
from cachediv.placement import CacheConfig, CachePlacement, place_caches, resolve_cache_size
from cachediv.scheduler import LinkBudget, run_algorithm1
from cachediv.streams import PLACEMENT_TAG, TRIAL_TAG, check_seed, derive_rng, float_key
from cachediv.theory import TheoryParams, predicted_exponent, theorem_lower_bound

log = logging.getLogger(__name__)

Z95 = 1.959963984540054
DEFAULT_TRIALS = 500


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a list of network sizes under a fixed model.

    Give either ``k`` (cache size ``round(n**k)`` per point) or a fixed
    ``m``.
    """

    n_values: tuple
    alpha: float
    k: Optional[float] = None
    m: Optional[int] = None
    beta: float = 1.0
    noise: float = 1.0
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    freeze_placement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.n_values[0] < 1:
            raise ValueError("node counts must be >= 1")
        if (self.k is None) == (self.m is None):
            raise ValueError("give exactly one of k and m")
        if self.k is not None and not 0.0 <= self.k <= 1.0:
            raise ValueError(f"k must lie in [0, 1], got {self.k}")
        if self.m is not None and not 1 <= self.m <= self.n_values[0]:
            raise ValueError(f"m must satisfy 1 <= m <= min(n_values), got {self.m}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        check_alpha(self.alpha)
        check_seed(self.master_seed)
        LinkBudget(self.beta, self.noise)

    @property
    def budget(self) -> LinkBudget:
        return LinkBudget(self.beta, self.noise)

    def cache_config(self, n: int) -> CacheConfig:
        if self.k is not None:
            return CacheConfig.from_exponent(n, self.k)
        return CacheConfig(n=n, m=self.m)

    def stream_key(self, n: int) -> tuple:
        size_key = float_key(self.k) if self.k is not None else self.m
        return (n, int(self.k is None), size_key, float_key(self.alpha))


@dataclass(frozen=True)
class AggregatePoint:
    n: int
    m: int
    k: Optional[float]
    alpha: float
    beta: float
    noise: float
    trials: int
    seed: int
    mean_T: float
    std_T: float
    ci95: float
    mean_t_star: float


@dataclass(frozen=True)
class ScalingEstimate:
    slope: float
    intercept: float
    r_squared: float
    predicted_slope: Optional[float]
    points: int
    n_min: int
    n_max: int
    k: Optional[float] = None
    alpha: Optional[float] = None
    trials: Optional[int] = None


@dataclass(frozen=True)
class BoundCheck:
    n: int
    mean_T: float
    ci95: float
    t_over_4: float

    @property
    def below_bound(self) -> bool:
        return self.mean_T < self.t_over_4


def run_trial(n: int, config: CacheConfig, alpha: float, budget: LinkBudget,
              rng: np.random.Generator, placement: Optional[CachePlacement] = None):
    """One network realization: fresh channel, fresh placement unless given."""
    gamma = generate_matrix(n, alpha, rng)
    if placement is None:
        placement = place_caches(config, rng)
    return run_algorithm1(gamma, placement, budget)


def _run_trials(spec: ExperimentSpec, n: int, indices: Sequence[int]) -> np.ndarray:
    config = spec.cache_config(n)
    key = spec.stream_key(n)
    placement = None
    if spec.freeze_placement:
        placement = place_caches(config, derive_rng(spec.master_seed, PLACEMENT_TAG, *key))
    budget = spec.budget
    out = np.empty((len(indices), 2), dtype=np.int64)
    for row, j in enumerate(indices):
        rng = derive_rng(spec.master_seed, TRIAL_TAG, *key, j)
        _, outcome = run_trial(n, config, spec.alpha, budget, rng, placement)
        out[row] = outcome.throughput, outcome.t_star
    return out


def _run_chunk(args):
    return _run_trials(*args)


def trial_results(spec: ExperimentSpec, n: int, workers: int = 1) -> np.ndarray:
    """``(trials, 2)`` array of ``(T, t_star)`` in trial-index order."""
    indices = range(spec.trials)
    if workers <= 1 or spec.trials == 1:
        return _run_trials(spec, n, indices)
    n_chunks = min(spec.trials, workers * 4)
    bounds = np.linspace(0, spec.trials, n_chunks + 1).astype(int)
    chunks = [(spec, n, range(lo, hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, which is trial-index order
        parts = list(pool.map(_run_chunk, chunks))
    return np.concatenate(parts, axis=0)


def aggregate(spec: ExperimentSpec, n: int, results: np.ndarray) -> AggregatePoint:
    T = results[:, 0].astype(float)
    trials = len(T)
    std = float(np.std(T, ddof=1)) if trials > 1 else 0.0
    return AggregatePoint(
        n=n,
        m=spec.cache_config(n).m,
        k=spec.k,
        alpha=spec.alpha,
        beta=spec.beta,
        noise=spec.noise,
        trials=trials,
        seed=spec.master_seed,
        mean_T=float(np.mean(T)),
        std_T=std,
        ci95=Z95 * std / math.sqrt(trials),
        mean_t_star=float(np.mean(results[:, 1])),
    )


def run_point(spec: ExperimentSpec, n: int, workers: int = 1) -> AggregatePoint:
    return aggregate(spec, n, trial_results(spec, n, workers))


def sweep(spec: ExperimentSpec, workers: int = 1) -> list[AggregatePoint]:
    return [run_point(spec, n, workers) for n in spec.n_values]


def fit_exponent(points: Sequence[AggregatePoint]) -> ScalingEstimate:
    """Least-squares slope of ``log(mean_T)`` against ``log(n)``.

    Points with zero mean throughput are dropped with a warning.
    """
    usable = [p for p in points if p.mean_T > 0]
    if len(usable) < len(points):
        dropped = sorted(p.n for p in points if p.mean_T <= 0)
        log.warning("dropping points with zero mean throughput: n=%s", dropped)
    if len(usable) < 2:
        raise ValueError("need at least two points with positive mean throughput")
    usable.sort(key=lambda p: p.n)
    x = np.log([p.n for p in usable])
    y = np.log([p.mean_T for p in usable])
    xc, yc = x - x.mean(), y - y.mean()
    sxx = float(xc @ xc)
    if sxx == 0:
        raise ValueError("need at least two distinct n values")
    slope = float(xc @ yc) / sxx
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(np.sum((yc - slope * xc) ** 2))
    ss_tot = float(yc @ yc)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    first = usable[0]
    ks = {p.k for p in usable}
    alphas = {p.alpha for p in usable}
    k = first.k if len(ks) == 1 else None
    alpha = first.alpha if len(alphas) == 1 else None
    predicted = predicted_exponent(k, alpha) if k is not None and alpha is not None else None
    return ScalingEstimate(
        slope=slope,
        intercept=intercept,
        r_squared=min(max(r2, 0.0), 1.0),
        predicted_slope=predicted,
        points=len(usable),
        n_min=usable[0].n,
        n_max=usable[-1].n,
        k=k,
        alpha=alpha,
        trials=first.trials,
    )


def exponent_grid(k_values: Sequence[float], alpha_values: Sequence[float],
                  template: ExperimentSpec, workers: int = 1) -> list[ScalingEstimate]:
    """Fit one exponent per ``(k, alpha)`` cell, ``k`` varying fastest."""
    out = []
    for alpha in alpha_values:
        for k in k_values:
            spec = replace(template, k=k, m=None, alpha=alpha)
            out.append(fit_exponent(sweep(spec, workers)))
    return out


def validate_theorem(spec: ExperimentSpec, epsilon: float, workers: int = 1) -> list[BoundCheck]:
    """Measured mean throughput next to the asymptotic ``t/4`` bound.

    A row with ``below_bound`` set is informational only; the bound is
    asymptotic.
    """
    if spec.k is None:
        raise ValueError("bound check needs the memory exponent k")
    rows = []
    for n in spec.n_values:
        point = run_point(spec, n, workers)
        bound = theorem_lower_bound(TheoryParams(n, spec.k, spec.alpha, epsilon))
        row = BoundCheck(n, point.mean_T, point.ci95, bound)
        if row.below_bound:
            log.info("n=%d: mean throughput %.3f below asymptotic bound %.3f", n, row.mean_T, bound)
        rows.append(row)
    return rows
