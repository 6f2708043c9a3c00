"""Closed-form proximal operators for the four objective blocks.

Each operator solves ``argmin_x  f(x) + ||x - point||^2 / (2 step)``
exactly.  The tests pit every closed form against an independent
numerical minimizer of the same objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RegParams",
    "prox_edge_weights",
    "prox_neg_log",
    "prox_trace_group_lasso",
    "prox_nonneg_linear",
    "svt",
    "l21_norm",
]

# groups with norm below this map to zero (the "else 0" branch)
_ZERO_GROUP = 1e-300


@dataclass(frozen=True)
class RegParams:
    """Regularization weights of the objective.

    ``alpha`` weighs the log barrier on degrees, ``beta`` the squared
    Frobenius term on weights, and ``gamma21`` / ``gammastar`` the group
    (column-sparsity) and nuclear-norm penalties on the hidden-effect
    matrix.  At most one of the two K penalties may be nonzero in a
    single solve.
    """

    alpha: float
    beta: float = 0.0
    gamma21: float = 0.0
    gammastar: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive (log-barrier weight)")
        if self.beta < 0 or self.gamma21 < 0 or self.gammastar < 0:
            raise ValueError("regularization weights must be nonnegative")
        if self.gamma21 > 0 and self.gammastar > 0:
            raise ValueError("at most one of gamma21 / gammastar may be nonzero")


def _check_step(step: float):
    if step <= 0:
        raise ValueError(f"prox step must be positive, got {step}")


def prox_edge_weights(point: np.ndarray, z: np.ndarray, beta: float, step: float) -> np.ndarray:
    """Prox of ``z^T x / 2 + beta ||x||^2`` restricted to x >= 0.

    Closed form ``max{(point - step z / 2) / (2 step beta + 1), 0}``.
    """
    _check_step(step)
    shifted = (point - 0.5 * step * z) / (2.0 * step * beta + 1.0)
    return np.maximum(shifted, 0.0)


def prox_neg_log(point: np.ndarray, alpha: float, step: float) -> np.ndarray:
    """Prox of ``-alpha 1^T log(x)``; output is strictly positive.

    Elementwise root of x^2 - point x - alpha step = 0:
    ``(point + sqrt(point^2 + 4 alpha step)) / 2``.
    """
    _check_step(step)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    point = np.asarray(point, dtype=float)
    return 0.5 * (point + np.sqrt(point**2 + 4.0 * alpha * step))


def prox_trace_group_lasso(
    point: np.ndarray,
    b_indices: np.ndarray,
    gamma: float,
    step: float,
    mode: str = "per_column",
) -> np.ndarray:
    """Prox of ``2 b^T x + gamma * (column-group norm of X)``.

    The linear part shifts the input by ``2 step b``; the remaining
    group shrinkage acts per column of the (o, o) matrix behind the
    column-stacked vector (``per_column``, default) or on the whole
    vector at once (``global``).  Groups with vanishing norm map to
    zero.
    """
    _check_step(step)
    shifted = np.asarray(point, dtype=float).copy()
    shifted[b_indices] -= 2.0 * step
    if gamma == 0.0:
        return shifted
    radius = step * gamma
    if mode == "global":
        norm = np.linalg.norm(shifted)
        factor = max(1.0 - radius / norm, 0.0) if norm > _ZERO_GROUP else 0.0
        return factor * shifted
    if mode != "per_column":
        raise ValueError(f"unknown mode {mode!r}")
    o = b_indices.size
    cols = shifted.reshape(o, o, order="F")
    norms = np.linalg.norm(cols, axis=0)
    factors = np.where(norms > _ZERO_GROUP, np.maximum(1.0 - radius / np.maximum(norms, _ZERO_GROUP), 0.0), 0.0)
    return (cols * factors).reshape(-1, order="F")


def prox_nonneg_linear(point: np.ndarray, step: float, d=(1.0, 0.0)) -> np.ndarray:
    """Prox of ``d^T x`` restricted to x >= 0: ``max{point - step d, 0}``."""
    _check_step(step)
    return np.maximum(np.asarray(point, dtype=float) - step * np.asarray(d, dtype=float), 0.0)


def svt(Y: np.ndarray, nu: float) -> np.ndarray:
    """Singular value thresholding, the prox of ``nu ||X||_*``.

    Soft-thresholds the singular values of Y at ``nu`` and rebuilds the
    matrix with the original singular vectors.
    """
    if nu < 0:
        raise ValueError("threshold must be nonnegative")
    U, s, Vt = np.linalg.svd(np.asarray(Y, dtype=float), full_matrices=False)
    s = np.maximum(s - nu, 0.0)
    return (U * s) @ Vt


def l21_norm(K: np.ndarray) -> float:
    """Sum of the column Euclidean norms of K."""
    return float(np.linalg.norm(K, axis=0).sum())
