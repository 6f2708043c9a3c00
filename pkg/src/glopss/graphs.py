"""Graph containers, observed/hidden partitioning, and half-vectorization.

Conventions used throughout the package:

* An undirected weighted graph on ``m`` nodes is a symmetric nonnegative
  ``(m, m)`` matrix with zero diagonal.
* Edge weights of the observed block are stacked into a vector by
  enumerating the strictly-upper-triangular pairs ``(i, j)``, ``i < j``,
  in lexicographic (row-major) order, i.e. the order produced by
  ``numpy.triu_indices(o, 1)``.  File formats rely on this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Graph",
    "ObservationMask",
    "laplacian",
    "partition",
    "vec_upper",
    "unvec_upper",
    "pair_count",
]


def pair_count(o: int) -> int:
    """Number of unordered node pairs, p = o(o-1)/2."""
    return o * (o - 1) // 2


def _as_adjacency(weights, atol: float = 1e-10) -> np.ndarray:
    W = np.asarray(weights, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise ValueError("adjacency contains non-finite entries")
    if not np.allclose(W, W.T, rtol=0.0, atol=atol):
        raise ValueError("adjacency must be symmetric")
    if np.any(np.abs(np.diag(W)) > atol):
        raise ValueError("adjacency must have zero diagonal (no self-loops)")
    if np.any(W < -atol):
        raise ValueError("adjacency must be nonnegative")
    W = 0.5 * (W + W.T)
    np.fill_diagonal(W, 0.0)
    return np.clip(W, 0.0, None)


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph held as a dense adjacency matrix.

    Parameters
    ----------
    weights : (m, m) ndarray
        Symmetric nonnegative edge weights with zero diagonal.  Tiny
        asymmetries (below 1e-10) are symmetrized away; anything larger
        raises ``ValueError``.
    """

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_adjacency(self.weights))
        self.weights.setflags(write=False)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    def laplacian(self) -> np.ndarray:
        return laplacian(self.weights)

    def is_connected(self, tol: float = 1e-12) -> bool:
        """Connectivity via the multiplicity of the Laplacian's zero eigenvalue."""
        if self.m == 1:
            return True
        vals = np.linalg.eigvalsh(self.laplacian())
        scale = max(vals[-1], 1.0)
        return bool(vals[1] > tol * scale)


def laplacian(graph) -> np.ndarray:
    """Combinatorial Laplacian ``Diag(W 1) - W``.

    Accepts a :class:`Graph` or a raw adjacency matrix.  The result is
    symmetric PSD with zero row sums.
    """
    W = graph.weights if isinstance(graph, Graph) else np.asarray(graph, dtype=float)
    return np.diag(W.sum(axis=1)) - W


@dataclass(frozen=True)
class ObservationMask:
    """Partition of the node set into observed and hidden indices.

    Both index lists are strictly increasing and together cover
    ``range(m)``.  At least two nodes must be observed.
    """

    observed: np.ndarray
    hidden: np.ndarray

    def __post_init__(self):
        obs = np.asarray(self.observed, dtype=int)
        hid = np.asarray(self.hidden, dtype=int)
        if obs.size < 2:
            raise ValueError("need at least 2 observed nodes")
        for name, idx in (("observed", obs), ("hidden", hid)):
            if idx.size > 1 and np.any(np.diff(idx) <= 0):
                raise ValueError(f"{name} indices must be strictly increasing")
        m = obs.size + hid.size
        merged = np.concatenate([obs, hid])
        if not np.array_equal(np.sort(merged), np.arange(m)):
            raise ValueError("observed and hidden must partition range(m)")
        object.__setattr__(self, "observed", obs)
        object.__setattr__(self, "hidden", hid)
        obs.setflags(write=False)
        hid.setflags(write=False)

    @classmethod
    def from_hidden(cls, m: int, hidden) -> "ObservationMask":
        hid = np.sort(np.asarray(hidden, dtype=int))
        obs = np.setdiff1d(np.arange(m), hid)
        return cls(observed=obs, hidden=hid)

    @property
    def m(self) -> int:
        return self.observed.size + self.hidden.size

    @property
    def o(self) -> int:
        return self.observed.size

    @property
    def h(self) -> int:
        return self.hidden.size

    @property
    def xi(self) -> float:
        """Observability coefficient o/m."""
        return self.o / self.m


def partition(g: Graph, mask: ObservationMask):
    """Split the adjacency into observed/cross/hidden blocks.

    Returns ``(W_O, W_OH, W_H)`` such that reordering nodes as
    ``[observed, hidden]`` reassembles the full matrix as
    ``[[W_O, W_OH], [W_OH.T, W_H]]``.
    """
    if mask.m != g.m:
        raise ValueError(f"mask covers {mask.m} nodes, graph has {g.m}")
    if mask.observed.size and mask.observed.max() >= g.m:
        raise IndexError("observed index out of range")
    W = g.weights
    W_O = W[np.ix_(mask.observed, mask.observed)]
    W_OH = W[np.ix_(mask.observed, mask.hidden)]
    W_H = W[np.ix_(mask.hidden, mask.hidden)]
    return W_O, W_OH, W_H


def vec_upper(W: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Stack the strictly-upper-triangular entries of a symmetric matrix.

    The pair order is lexicographic in ``(i, j)`` with ``i < j``; the
    inverse map is :func:`unvec_upper`.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(W, W.T, rtol=0.0, atol=atol):
        raise ValueError("matrix must be symmetric")
    iu, ju = np.triu_indices(W.shape[0], k=1)
    return W[iu, ju].copy()


def unvec_upper(w: np.ndarray) -> np.ndarray:
    """Rebuild the symmetric zero-diagonal matrix from its pair vector."""
    w = np.asarray(w, dtype=float)
    p = w.size
    o = int(round((1 + np.sqrt(1 + 8 * p)) / 2))
    if pair_count(o) != p:
        raise ValueError(f"vector length {p} is not o(o-1)/2 for any integer o")
    W = np.zeros((o, o))
    iu, ju = np.triu_indices(o, k=1)
    W[iu, ju] = w
    W[ju, iu] = w
    return W
