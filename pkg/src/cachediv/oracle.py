"""Exhaustive optimal scheduling for small networks.

Searches every destination assignment (one cached destination per source)
and every non-empty activation set. The SINR evaluation here is written
independently of :mod:`cachediv.scheduler` so it can serve as ground
truth for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from cachediv.channel import generate_matrix
from cachediv.placement import CacheConfig, CachePlacement, place_caches
from cachediv.scheduler import LinkBudget, run_algorithm1
from cachediv.streams import ORACLE_TAG, derive_rng

MAX_NODES = 10
MAX_ASSIGNMENTS = 10**6
# bound on assignment x subset x n x n elements materialized at once
_CHUNK_ELEMENTS = 4_000_000


class OracleSizeError(ValueError):
    """Instance too large to enumerate."""


@dataclass(frozen=True)
class OracleResult:
    best_T: int
    best_dest: np.ndarray
    active: np.ndarray


@dataclass(frozen=True)
class GapRow:
    trial: int
    n: int
    m: int
    T_alg: int
    T_oracle: int

    @property
    def ratio(self) -> float:
        return self.T_alg / self.T_oracle if self.T_oracle > 0 else float("nan")


@dataclass(frozen=True)
class GapSummary:
    rows: list
    mean_oracle_T: float
    mean_alg_T: float
    mean_ratio: float


def _subset_matrix(n: int) -> np.ndarray:
    # row b-1 is the binary expansion of b, bit i <-> source i
    b = np.arange(1, 2**n)
    return ((b[:, None] >> np.arange(n)) & 1).astype(bool)


def oracle_optimum(gamma: np.ndarray, placement: CachePlacement, budget: LinkBudget) -> OracleResult:
    """Maximum distinct-destination throughput over all strategies.

    Assignments are enumerated in mixed-radix order with source 0 as the
    most significant digit, subsets in binary-counter order; the first
    maximizer found is returned as the witness.
    """
    gamma = np.asarray(gamma, dtype=float)
    n, m = placement.n, placement.m
    if n > MAX_NODES or m**n > MAX_ASSIGNMENTS:
        raise OracleSizeError(f"n={n}, m={m} exceeds the enumeration bound")

    subsets = _subset_matrix(n)
    n_sub = subsets.shape[0]
    sub_f = subsets.astype(float)
    rows = np.arange(n)
    chunk = max(1, _CHUNK_ELEMENTS // (n_sub * n * n))

    best_T, best_a, best_b = -1, 0, 0
    assignments = itertools.product(*placement.caches.tolist())
    offset = 0
    while True:
        block = np.array(list(itertools.islice(assignments, chunk)), dtype=np.intp).reshape(-1, n)
        if block.shape[0] == 0:
            break
        # gains[a, k, q]: power of source k at the destination assigned to source q
        gains = gamma[:, block].transpose(1, 0, 2)
        signal = gamma[rows, block]  # [a, q]
        total = np.einsum("bk,akq->abq", sub_f, gains)
        interference = total - signal[:, None, :]
        with np.errstate(divide="ignore"):
            ok = signal[:, None, :] / (budget.noise + interference) >= budget.beta
        ok &= subsets[None, :, :]
        onehot = block[:, :, None] == np.arange(n)  # [a, q, j]
        served = np.einsum("abq,aqj->abj", ok.astype(np.int32), onehot.astype(np.int32)) > 0
        T = served.sum(axis=2)
        flat = int(np.argmax(T))
        a, b = divmod(flat, n_sub)
        if T[a, b] > best_T:
            best_T, best_a, best_b = int(T[a, b]), offset + a, b
            best_block_row = block[a].copy()
        offset += block.shape[0]

    return OracleResult(best_T, best_block_row, np.flatnonzero(subsets[best_b]))


def optimality_gap(trials: int, config: CacheConfig, alpha: float, budget: LinkBudget, master_seed: int) -> GapSummary:
    """Pair the scheduler and the oracle on identical random instances."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for j in range(trials):
        rng = derive_rng(master_seed, ORACLE_TAG, config.n, config.m, j)
        gamma = generate_matrix(config.n, alpha, rng)
        placement = place_caches(config, rng)
        _, outcome = run_algorithm1(gamma, placement, budget)
        best = oracle_optimum(gamma, placement, budget)
        rows.append(GapRow(j, config.n, config.m, outcome.throughput, best.best_T))
    ratios = [r.ratio for r in rows if r.T_oracle > 0]
    return GapSummary(
        rows=rows,
        mean_oracle_T=float(np.mean([r.T_oracle for r in rows])),
        mean_alg_T=float(np.mean([r.T_alg for r in rows])),
        mean_ratio=float(np.mean(ratios)) if ratios else float("nan"),
    )
