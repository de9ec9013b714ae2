"""Uniform random cache placement.

Files and destinations share an index: destination ``j`` requests file
``j``. A source can therefore serve exactly the destinations whose files
it caches, so its serveable set equals its cache contents. All indices are
0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


def resolve_cache_size(n: int, k: float) -> int:
    """Cache size ``m = round(n**k)`` (half-up), clamped to ``[1, n]``."""
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"memory exponent k must lie in [0, 1], got {k}")
    m = math.floor(n**k + 0.5)
    return min(max(m, 1), n)


@dataclass(frozen=True)
class CacheConfig:
    n: int
    m: int
    k: Optional[float] = None

    def __post_init__(self):
        if self.k is not None and self.m != resolve_cache_size(self.n, self.k):
            raise ValueError(f"m={self.m} inconsistent with n={self.n}, k={self.k}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"cache size must satisfy 1 <= m <= n, got m={self.m}, n={self.n}")

    @classmethod
    def from_exponent(cls, n: int, k: float) -> "CacheConfig":
        return cls(n=n, m=resolve_cache_size(n, k), k=k)


@dataclass(frozen=True)
class CachePlacement:
    """Per-source cache contents.

    ``caches`` is an ``(n, m)`` integer array; row ``i`` holds the sorted
    file indices cached at source ``i``.
    """

    caches: np.ndarray

    def __post_init__(self):
        caches = np.asarray(self.caches, dtype=np.intp)
        if caches.ndim != 2 or caches.shape[1] < 1:
            raise ValueError("caches must be an (n, m) array with m >= 1")
        n, m = caches.shape
        if m > n or caches.min() < 0 or caches.max() >= n:
            raise ValueError("cache entries must be file indices in [0, n)")
        caches = np.sort(caches, axis=1)
        if m > 1 and np.any(np.diff(caches, axis=1) == 0):
            raise ValueError("a cache may not hold the same file twice")
        caches.setflags(write=False)
        object.__setattr__(self, "caches", caches)

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "CachePlacement":
        return cls(np.array([sorted(s) for s in sets], dtype=np.intp))

    @property
    def n(self) -> int:
        return self.caches.shape[0]

    @property
    def m(self) -> int:
        return self.caches.shape[1]

    @property
    def delta(self) -> list[frozenset]:
        """Serveable destinations per source (identical to the cache sets)."""
        return [frozenset(row.tolist()) for row in self.caches]

    def mask(self) -> np.ndarray:
        """Boolean ``(n, n)`` matrix, ``True`` where source ``i`` can serve ``j``."""
        mask = np.zeros((self.n, self.n), dtype=bool)
        np.put_along_axis(mask, self.caches, True, axis=1)
        return mask


def place_caches(config: CacheConfig, rng: np.random.Generator) -> CachePlacement:
    """Fill each cache with an independent uniform ``m``-subset of the pool."""
    n, m = config.n, config.m
    if m == n:
        return CachePlacement(np.tile(np.arange(n), (n, 1)))
    # the m smallest of n i.i.d. uniform keys form a uniform random m-subset
    keys = rng.random((n, n))
    return CachePlacement(np.argpartition(keys, m - 1, axis=1)[:, :m])


def coverage(placement: CachePlacement) -> float:
    """Fraction of destinations serveable by at least one source."""
    return np.unique(placement.caches).size / placement.n
