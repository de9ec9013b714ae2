"""Pareto channel-power model.

Channel power gains follow the Pareto law on ``[1, inf)``::

    f(x) = alpha / x**(alpha + 1),   F(x) = 1 - x**(-alpha)

All functions accept scalars or arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import numpy as np


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (np.isfinite(alpha) and alpha > 1):
        raise ValueError(f"Pareto shape alpha must be > 1, got {alpha}")
    return alpha


def _unwrap(out):
    return out.item() if np.ndim(out) == 0 else out


def pareto_pdf(alpha, x):
    alpha = check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x >= 1, alpha / np.maximum(x, 1.0) ** (alpha + 1), 0.0)
    return _unwrap(out)


def pareto_cdf(alpha, x):
    alpha = check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1, 1.0 - np.maximum(x, 1.0) ** (-alpha), 0.0)
    return _unwrap(out)


def pareto_quantile(alpha, u):
    """Inverse CDF, ``(1 - u)**(-1/alpha)`` for ``0 <= u < 1``."""
    alpha = check_alpha(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(~(u >= 0)) or np.any(u >= 1):
        raise ValueError("quantile level u must lie in [0, 1)")
    return _unwrap((1.0 - u) ** (-1.0 / alpha))


def pareto_mean(alpha) -> float:
    return check_alpha(alpha) / (alpha - 1.0)


def generate_matrix(n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Draw an ``n x n`` matrix of i.i.d. Pareto channel powers.

    Entry ``[i, j]`` is the power from source ``i`` to destination ``j``.
    One uniform draw per entry, mapped through the inverse CDF, so the
    result is a deterministic function of the generator state.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    alpha = check_alpha(alpha)
    u = rng.random((n, n))
    return (1.0 - u) ** (-1.0 / alpha)
