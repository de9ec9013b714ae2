"""Opportunistic transmission strategy.

Each source picks the cached-file destination with its strongest direct
link. The resulting source-destination pairs are ranked by direct-link
power, and the scheduler activates the ``i`` strongest pairs for the ``i``
in ``1..n`` that maximizes the number of served destinations.

A link ``s -> d`` succeeds when::

    gamma[s, d] / (noise + sum_{k active, k != s} gamma[k, d]) >= beta

Throughput counts distinct destinations with at least one successful
incoming link, so two sources that picked the same destination can never
count twice. The raw count of successful links is kept alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cachediv.placement import CachePlacement


@dataclass(frozen=True)
class LinkBudget:
    """SINR threshold and noise power, both on a linear scale."""

    beta: float = 1.0
    noise: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"SINR threshold beta must be > 0, got {self.beta}")
        if not self.noise >= 0:
            raise ValueError(f"noise power must be >= 0, got {self.noise}")


@dataclass(frozen=True)
class TransmissionStrategy:
    """Chosen destinations plus the activated sources.

    Attributes
    ----------
    best_dest : ndarray of int
        Destination chosen by each source.
    direct_power : ndarray of float
        ``gamma[i, best_dest[i]]`` for each source ``i``.
    order : ndarray of int
        Sources sorted by ``direct_power`` ascending, ties by index.
    active : ndarray of int
        The ``t_star`` strongest sources, i.e. ``order[n - t_star:]``.
    """

    best_dest: np.ndarray
    direct_power: np.ndarray
    order: np.ndarray
    active: np.ndarray

    @property
    def t_star(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class TrialOutcome:
    """Evaluation of one activation set.

    ``successes`` and ``sinr`` are aligned with the activation set they
    were computed for. ``throughput`` counts distinct served destinations,
    ``link_successes`` counts successful links.
    """

    throughput: int
    t_star: int
    successes: np.ndarray
    sinr: np.ndarray
    link_successes: int


def best_destinations(gamma: np.ndarray, placement: CachePlacement) -> tuple[np.ndarray, np.ndarray]:
    """Strongest serveable destination per source, lowest index on ties."""
    gamma = np.asarray(gamma, dtype=float)
    n = gamma.shape[0]
    if gamma.shape != (n, n) or placement.n != n:
        raise ValueError("channel matrix and placement disagree on n")
    if placement.m < 1:
        raise ValueError("every source must be able to serve a destination")
    # np.argmax returns the first maximum, caches rows are sorted ascending
    local = np.take_along_axis(gamma, placement.caches, axis=1)
    pick = np.argmax(local, axis=1)
    best_dest = placement.caches[np.arange(n), pick]
    return best_dest, local[np.arange(n), pick]


def sinr(gamma: np.ndarray, active, source: int, dest: int, budget: LinkBudget) -> float:
    """SINR of ``source -> dest`` with every other member of ``active`` interfering."""
    active = np.asarray(active, dtype=np.intp)
    if source not in active:
        raise ValueError(f"source {source} is not in the active set")
    others = active[active != source]
    denom = budget.noise + float(np.sum(gamma[others, dest]))
    if denom == 0:
        raise ZeroDivisionError("SINR undefined: no noise and no interference")
    return float(gamma[source, dest]) / denom


def _distinct_served(success: np.ndarray, dests: np.ndarray) -> np.ndarray:
    """Per-row count of distinct ``dests`` hit by a ``True`` in ``success``.

    ``success`` has shape ``(rows, len(dests))``.
    """
    perm = np.argsort(dests, kind="stable")
    sorted_dests = dests[perm]
    starts = np.flatnonzero(np.r_[True, sorted_dests[1:] != sorted_dests[:-1]])
    if len(starts) == len(dests):
        return success.sum(axis=1)
    grouped = np.logical_or.reduceat(success[:, perm], starts, axis=1)
    return grouped.sum(axis=1)


def evaluate_throughput(gamma: np.ndarray, best_dest, active, budget: LinkBudget) -> TrialOutcome:
    """Evaluate one activation set directly (no incremental reuse).

    Every source in ``active`` transmits to ``best_dest[source]``.
    """
    gamma = np.asarray(gamma, dtype=float)
    best_dest = np.asarray(best_dest, dtype=np.intp)
    active = np.asarray(active, dtype=np.intp)
    if active.size == 0:
        raise ValueError("activation set must be non-empty")
    dests = best_dest[active]
    received = gamma[np.ix_(active, dests)]  # [p, q]: power from active[p] at dests[q]
    signal = np.diag(received)
    interference = received.sum(axis=0) - signal
    with np.errstate(divide="ignore"):
        ratio = signal / (budget.noise + interference)
    ok = ratio >= budget.beta
    return TrialOutcome(
        throughput=int(_distinct_served(ok[None, :], dests)[0]),
        t_star=int(active.size),
        successes=ok,
        sinr=ratio,
        link_successes=int(ok.sum()),
    )


def nested_throughputs(gamma: np.ndarray, best_dest, order, budget: LinkBudget) -> np.ndarray:
    """Throughput of every nested candidate, strongest pair first.

    Entry ``i - 1`` is the throughput when the ``i`` strongest pairs are
    active. A candidate differs from its predecessor by one source, so the
    interference at each destination is a running sum down the ranked
    sources: O(n^2) for all ``n`` candidates together.
    """
    gamma = np.asarray(gamma, dtype=float)
    ranked = np.asarray(order, dtype=np.intp)[::-1]
    dests = np.asarray(best_dest, dtype=np.intp)[ranked]
    n = ranked.size
    received = gamma[np.ix_(ranked, dests)]  # [p, q]: rank-p source at rank-q destination
    running = np.cumsum(received, axis=0)  # row i: total power with ranks 0..i active
    signal = np.diag(received).copy()
    with np.errstate(divide="ignore"):
        ratio = signal / (budget.noise + (running - signal))
    ok = (ratio >= budget.beta) & np.tri(n, dtype=bool)
    return _distinct_served(ok, dests)


def run_algorithm1(gamma: np.ndarray, placement: CachePlacement, budget: LinkBudget) -> tuple[TransmissionStrategy, TrialOutcome]:
    """Choose destinations, rank pairs and activate the best nested prefix.

    Ties between candidates with equal throughput go to the smallest
    activation set.
    """
    best_dest, direct_power = best_destinations(gamma, placement)
    order = np.argsort(direct_power, kind="stable")
    per_candidate = nested_throughputs(gamma, best_dest, order, budget)
    t_star = int(np.argmax(per_candidate)) + 1
    active = order[order.size - t_star:]
    strategy = TransmissionStrategy(best_dest, direct_power, order, active)
    return strategy, evaluate_throughput(gamma, best_dest, active, budget)
