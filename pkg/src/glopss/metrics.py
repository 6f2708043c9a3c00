"""Recovery-quality metrics and theory diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, ObservationMask, laplacian

__all__ = [
    "EdgeRecoveryReport",
    "RecoveryDiagnostics",
    "edge_set",
    "f_score",
    "effective_laplacian",
    "recovery_error",
    "suboptimality",
]

DEFAULT_EDGE_THRESHOLD = 1e-4


@dataclass(frozen=True)
class EdgeRecoveryReport:
    precision: float
    recall: float
    f_score: float
    edge_threshold: float


@dataclass(frozen=True)
class RecoveryDiagnostics:
    """Quantities entering the finite-sample recovery bound.

    ``frobenius_error`` measures the estimate against the effective
    (hidden-node-marginalized) Laplacian, ``xi`` is the fraction of
    observed nodes, ``delta_hat`` the empirical identifiability
    ``sigma_min(X_O X_O^T) / n`` and ``s_o`` the thresholded support
    size of the effective Laplacian.
    """

    frobenius_error: float
    xi: float
    delta_hat: float
    s_o: int


def edge_set(W: np.ndarray, rel_threshold: float = DEFAULT_EDGE_THRESHOLD):
    """Pairs (i, j), i < j whose weight exceeds rel_threshold * max weight."""
    W = np.asarray(W, dtype=float)
    cutoff = rel_threshold * W.max(initial=0.0)
    iu, ju = np.triu_indices(W.shape[0], k=1)
    keep = W[iu, ju] > cutoff
    return set(zip(iu[keep].tolist(), ju[keep].tolist()))


def f_score(
    W_true: np.ndarray,
    W_est: np.ndarray,
    rel_threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> EdgeRecoveryReport:
    """Edge-set precision/recall/F after relative-threshold binarization.

    Two empty edge sets count as perfect recovery (F = 1); exactly one
    empty set scores 0.
    """
    W_true = np.asarray(W_true, dtype=float)
    W_est = np.asarray(W_est, dtype=float)
    if W_true.shape != W_est.shape:
        raise ValueError(f"shape mismatch: {W_true.shape} vs {W_est.shape}")
    true_edges = edge_set(W_true, rel_threshold)
    est_edges = edge_set(W_est, rel_threshold)
    if not true_edges and not est_edges:
        return EdgeRecoveryReport(1.0, 1.0, 1.0, rel_threshold)
    if not true_edges or not est_edges:
        return EdgeRecoveryReport(0.0, 0.0, 0.0, rel_threshold)
    hits = len(true_edges & est_edges)
    precision = hits / len(est_edges)
    recall = hits / len(true_edges)
    f = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EdgeRecoveryReport(precision, recall, f, rel_threshold)


def effective_laplacian(L_full: np.ndarray, mask: ObservationMask) -> np.ndarray:
    """Schur complement of the hidden block: the object the estimator targets.

    ``L_O - L_OH pinv(L_HH) L_HO`` on the observed indices; falls back
    to the pseudo-inverse whenever the hidden block is singular (e.g. an
    isolated hidden node).
    """
    L = np.asarray(L_full, dtype=float)
    if mask.h == 0:
        return L[np.ix_(mask.observed, mask.observed)].copy()
    L_O = L[np.ix_(mask.observed, mask.observed)]
    L_OH = L[np.ix_(mask.observed, mask.hidden)]
    L_HH = L[np.ix_(mask.hidden, mask.hidden)]
    try:
        correction = L_OH @ np.linalg.solve(L_HH, L_OH.T)
        if not np.all(np.isfinite(correction)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        correction = L_OH @ np.linalg.pinv(L_HH, rcond=1e-12) @ L_OH.T
    out = L_O - correction
    return 0.5 * (out + out.T)


def recovery_error(
    L_est_O: np.ndarray,
    L_full,
    mask: ObservationMask,
    X_obs: np.ndarray | None = None,
    rel_threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> RecoveryDiagnostics:
    """Frobenius error versus the effective Laplacian plus diagnostics.

    ``L_full`` may be a :class:`Graph` or a full (m, m) Laplacian.  The
    empirical identifiability needs the observed signals; without them
    it is reported as nan.
    """
    if isinstance(L_full, Graph):
        L_full = laplacian(L_full)
    L_eff = effective_laplacian(L_full, mask)
    if L_est_O.shape != L_eff.shape:
        raise ValueError(f"estimate is {L_est_O.shape}, expected {L_eff.shape}")
    err = float(np.linalg.norm(L_est_O - L_eff, "fro"))
    if X_obs is not None:
        gram = X_obs @ X_obs.T
        delta_hat = float(np.linalg.svd(gram, compute_uv=False)[-1]) / X_obs.shape[1]
    else:
        delta_hat = float("nan")
    cutoff = rel_threshold * np.abs(L_eff).max(initial=0.0)
    s_o = int(np.count_nonzero(np.abs(L_eff) > cutoff))
    return RecoveryDiagnostics(frobenius_error=err, xi=mask.xi, delta_hat=delta_hat, s_o=s_o)


def suboptimality(w_hist, w_star: np.ndarray) -> np.ndarray:
    """Euclidean distance of every stored iterate to the reference weights."""
    w_star = np.asarray(w_star, dtype=float)
    return np.array([float(np.linalg.norm(np.asarray(w) - w_star)) for w in w_hist])
