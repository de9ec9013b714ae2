"""Closed-form scaling quantities and order-statistics helpers.

With cache size ``m = n**k`` and Pareto(alpha) channel powers, activating
the ``t = n**((k+1)/(alpha+1) - eps)`` strongest pairs yields on average at
least ``t/4`` successes for large ``n``. The pieces of that argument are
exposed here: the activation scale, the predicted exponent, the law of the
strongest cached link (max of ``m`` Pareto draws) and the normalizing
sequences for intermediate order statistics.

The ``check_*`` functions are Monte Carlo probes of the asymptotic lemmas
at finite size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from cachediv.channel import check_alpha, pareto_mean
from cachediv.placement import resolve_cache_size

DEFAULT_EPSILON = 0.05


@dataclass(frozen=True)
class TheoryParams:
    n: int
    k: float
    alpha: float
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"k must lie in [0, 1], got {self.k}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        check_alpha(self.alpha)

    @property
    def m(self) -> int:
        return resolve_cache_size(self.n, self.k)

    @property
    def i(self) -> int:
        """Rounded activation scale, at least 1."""
        return max(1, math.floor(activation_scale(self) + 0.5))


def predicted_exponent(k: float, alpha: float) -> float:
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"k must lie in [0, 1], got {k}")
    return (k + 1.0) / (check_alpha(alpha) + 1.0)


def activation_scale(p: TheoryParams) -> float:
    return float(p.n) ** (predicted_exponent(p.k, p.alpha) - p.epsilon)


def theorem_lower_bound(p: TheoryParams) -> float:
    """Asymptotic lower bound ``t/4`` on the mean throughput.

    Only meaningful as a reference curve; it is not a finite-n guarantee.
    """
    return activation_scale(p) / 4.0


def max_of_m_cdf(x, m: int, alpha: float):
    """CDF of the largest of ``m`` i.i.d. Pareto(alpha) draws."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    alpha = check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1, (1.0 - np.maximum(x, 1.0) ** (-alpha)) ** m, 0.0)
    return out.item() if out.ndim == 0 else out


def max_of_m_pdf(x, m: int, alpha: float):
    """Density of the largest of ``m`` Pareto draws (derivative of the CDF)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    alpha = check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    xs = np.maximum(x, 1.0)
    dens = m * (1.0 - xs ** (-alpha)) ** (m - 1) * alpha * xs ** (-(alpha + 1))
    out = np.where(x >= 1, dens, 0.0)
    return out.item() if out.ndim == 0 else out


def max_of_m_quantile(u, m: int, alpha: float):
    alpha = check_alpha(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(~(u >= 0)) or np.any(u >= 1):
        raise ValueError("quantile level u must lie in [0, 1)")
    # -expm1(log(u)/m) == 1 - u**(1/m) without cancellation for u near 1
    with np.errstate(divide="ignore"):
        tail = -np.expm1(np.log(u) / m)
    out = tail ** (-1.0 / alpha)
    return out.item() if out.ndim == 0 else out


def falk_normalizers(n: int, i: int, quantile: Callable, pdf: Callable) -> tuple[float, float]:
    """Centering and scale for the ``i``-th largest of ``n`` samples.

    ``a_n = F^{-1}(1 - i/n)`` and ``b_n = sqrt(i) / (n f(a_n))``, where
    ``quantile`` and ``pdf`` describe the per-sample law.
    """
    if not 1 <= i <= n:
        raise ValueError(f"order index must satisfy 1 <= i <= n, got i={i}, n={n}")
    if i / n >= 1:
        raise ValueError("i/n must be < 1")
    a_n = float(quantile(1.0 - i / n))
    b_n = math.sqrt(i) / (n * float(pdf(a_n)))
    return a_n, b_n


def falk_normalizers_max_of_m(n: int, i: int, m: int, alpha: float) -> tuple[float, float]:
    """:func:`falk_normalizers` for the max-of-``m`` Pareto law.

    Closed form: ``a_n = (1 - (1 - i/n)**(1/m))**(-1/alpha)``.
    """
    return falk_normalizers(
        n, i,
        quantile=lambda u: max_of_m_quantile(u, m, alpha),
        pdf=lambda x: max_of_m_pdf(x, m, alpha),
    )


def a_n_exact(p: TheoryParams, rounded: bool = True) -> float:
    """Exact centering ``F^{-1}(1 - t/n)`` for the max-of-``m`` law.

    With ``rounded`` the cache size and order index are the integers a
    simulation would use; otherwise the real-valued ``n**k`` and ``t``.
    """
    if rounded:
        return falk_normalizers_max_of_m(p.n, p.i, p.m, p.alpha)[0]
    m = float(p.n) ** p.k
    return float(max_of_m_quantile(1.0 - activation_scale(p) / p.n, m, p.alpha))


def a_n_asymptotic(p: TheoryParams) -> float:
    """Large-n approximation ``n**((k+1)/(alpha+1)) * n**(eps/alpha)``."""
    return float(p.n) ** predicted_exponent(p.k, p.alpha) * float(p.n) ** (p.epsilon / p.alpha)


def theory_table(p: TheoryParams) -> dict:
    """All closed-form quantities for one parameter set."""
    a_n, b_n = falk_normalizers_max_of_m(p.n, p.i, p.m, p.alpha)
    return {
        "n": p.n,
        "k": p.k,
        "alpha": p.alpha,
        "epsilon": p.epsilon,
        "m": p.m,
        "t": activation_scale(p),
        "exponent": predicted_exponent(p.k, p.alpha),
        "a_n_exact": a_n,
        "b_n": b_n,
        "a_n_asymptotic": a_n_asymptotic(p),
        "t_over_4": theorem_lower_bound(p),
    }


# Monte Carlo probes of the lemmas ------------------------------------------

def check_interference_bound(t: int, alpha: float, noise: float, replications: int, rng: np.random.Generator) -> float:
    """Estimate ``Pr{noise + I < 2 mu t}`` with ``I`` a sum of ``t - 1`` Pareto gains."""
    if t < 1:
        raise ValueError("t must be >= 1")
    mu = pareto_mean(alpha)
    hits = 0
    for _ in range(replications):
        interference = np.sum((1.0 - rng.random(t - 1)) ** (-1.0 / alpha))
        hits += noise + interference < 2.0 * mu * t
    return hits / replications


def sample_top_order_statistic(n: int, i: int, m: int, alpha: float, replications: int, rng: np.random.Generator) -> np.ndarray:
    """Draw the ``i``-th largest of ``n`` i.i.d. max-of-``m`` Pareto values, repeatedly."""
    if not 1 <= i <= n:
        raise ValueError("order index out of range")
    out = np.empty(replications)
    for rep in range(replications):
        x = max_of_m_quantile(rng.random(n), m, alpha)
        out[rep] = np.partition(x, n - i)[n - i]
    return out


def check_direct_power_median(p: TheoryParams, replications: int, rng: np.random.Generator) -> float:
    """Estimate ``Pr{t-th strongest direct power >= a_n}``; tends to 1/2."""
    stats = sample_top_order_statistic(p.n, p.i, p.m, p.alpha, replications, rng)
    return float(np.mean(stats >= a_n_exact(p)))


def falk_standardized(n: int, i: int, m: int, alpha: float, replications: int, rng: np.random.Generator) -> np.ndarray:
    """``(X_(n-i+1) - a_n) / b_n`` over independent replications."""
    a_n, b_n = falk_normalizers_max_of_m(n, i, m, alpha)
    return (sample_top_order_statistic(n, i, m, alpha, replications, rng) - a_n) / b_n
