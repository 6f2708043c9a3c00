"""Vectorized problem data and the linear operators defining the constraints.

The convex program solved by this package couples four variable blocks::

    x = [w; u; k; v]
    w : length-p nonnegative edge weights of the observed subgraph
    u : length-o node degrees, tied to w through  B w = u
    k : length-o^2 column stacking of the hidden-effect matrix K
    v : length-2 pair (r, slack), both nonnegative

subject to the two linear constraint rows::

    (scalar row)   1/2 z^T w + 2 b^T k + a^T v = 0      with a = (1, -1)
    (degree rows)  B w - u = 0

``B`` maps pair weights to node degrees and ``b`` picks the diagonal of
``K`` out of its column stacking, so ``b^T k = tr(K)``.  Both are applied
matrix-free; dense forms exist only for spectral-norm computation and
tests, which keeps one iteration of the solvers at O(o^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial.distance import pdist

from .graphs import pair_count, unvec_upper

__all__ = [
    "ProblemData",
    "build_problem",
    "weight_degrees",
    "degree_adjoint",
    "diag_vec_indices",
    "constraint_residual",
    "spectral_norms",
    "grass_block_norms",
    "dense_constraint_blocks",
]


@lru_cache(maxsize=64)
def _pair_index(o: int):
    iu, ju = np.triu_indices(o, k=1)
    iu.setflags(write=False)
    ju.setflags(write=False)
    return iu, ju


def weight_degrees(w: np.ndarray, o: int) -> np.ndarray:
    """Apply the degree operator: row sums of the symmetric matrix behind w.

    Matrix-free in O(p); equals ``unvec_upper(w).sum(axis=1)``.
    """
    w = np.asarray(w, dtype=float)
    if w.size != pair_count(o):
        raise ValueError(f"expected {pair_count(o)} pair weights for o={o}, got {w.size}")
    iu, ju = _pair_index(o)
    return np.bincount(iu, weights=w, minlength=o) + np.bincount(ju, weights=w, minlength=o)


def degree_adjoint(y: np.ndarray, o: int) -> np.ndarray:
    """Adjoint of :func:`weight_degrees`: pair l = (i, j) receives y_i + y_j."""
    y = np.asarray(y, dtype=float)
    if y.size != o:
        raise ValueError(f"expected a length-{o} vector, got {y.size}")
    iu, ju = _pair_index(o)
    return y[iu] + y[ju]


def diag_vec_indices(o: int) -> np.ndarray:
    """Positions of the diagonal of an (o, o) matrix inside its column stacking."""
    return np.arange(o) * (o + 1)


@dataclass(frozen=True)
class ProblemData:
    """Everything derived from the observed signals.

    Attributes
    ----------
    o, p : int
        Observed node count and number of node pairs, p = o(o-1)/2.
    z : (p,) ndarray
        Pairwise squared distances between node data vectors, stacked in
        the upper-triangular pair order.
    c_obs : (o, o) ndarray
        Gram matrix of the observed signals (diagnostic only).
    b_indices : (o,) ndarray
        Diagonal positions inside the column stacking of K.
    a, d : (2,) ndarray
        Constraint and cost vectors of the v block, (1, -1) and (1, 0).
    kappa : float
        Largest entry of z.
    norm_m1 .. norm_m4 : float
        Spectral-norm constants of the four constraint blocks used for
        step-size selection; see :func:`spectral_norms`.
    """

    o: int
    p: int
    z: np.ndarray
    c_obs: np.ndarray
    b_indices: np.ndarray
    a: np.ndarray
    d: np.ndarray
    kappa: float
    norm_m1: float
    norm_m2: float
    norm_m3: float
    norm_m4: float

    def __post_init__(self):
        for arr in (self.z, self.c_obs, self.b_indices, self.a, self.d):
            arr.setflags(write=False)

    def trace_of_k(self, k: np.ndarray) -> float:
        """b^T k = tr(K) for k the column stacking of K."""
        return float(k[self.b_indices].sum())

    def scalar_row(self, w, k, v) -> float:
        """First constraint row, 1/2 z^T w + 2 b^T k + a^T v."""
        return float(0.5 * self.z @ w + 2.0 * self.trace_of_k(k) + self.a @ v)

    def degree_rows(self, w, u) -> np.ndarray:
        """Remaining constraint rows, B w - u."""
        return weight_degrees(w, self.o) - u


def build_problem(X_obs: np.ndarray) -> ProblemData:
    """Assemble :class:`ProblemData` from an (o, n) observed-signal matrix.

    Rows index observed nodes, columns index samples.  The entry
    ``z[l]`` for pair l = (i, j) is the squared Euclidean distance
    between the rows i and j, so that ``z^T w`` equals the Dirichlet
    energy ``tr(C_obs L(w))`` for every pair-weight vector w.  The
    model's smoothness term and scalar constraint row weigh it with the
    half convention ``z^T w / 2``.
    """
    X = np.atleast_2d(np.asarray(X_obs, dtype=float))
    if X.shape[0] < 2:
        raise ValueError(f"need at least 2 observed nodes, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise ValueError("signals contain non-finite values")
    o = X.shape[0]
    z = pdist(X, metric="sqeuclidean")  # same pair order as triu_indices
    c_obs = X @ X.T
    kappa = float(z.max()) if z.size else 0.0
    nm1, nm2, nm3, nm4 = _block_norms(z, o)
    return ProblemData(
        o=o,
        p=pair_count(o),
        z=z,
        c_obs=c_obs,
        b_indices=diag_vec_indices(o),
        a=np.array([1.0, -1.0]),
        d=np.array([1.0, 0.0]),
        kappa=kappa,
        norm_m1=nm1,
        norm_m2=nm2,
        norm_m3=nm3,
        norm_m4=nm4,
    )


def constraint_residual(pd: ProblemData, w, u, k, v):
    """Both blocks of A x for the current iterate.

    Returns
    -------
    scalar_row : float
        ``1/2 z^T w + 2 b^T k + a^T v``.
    degree_rows : (o,) ndarray
        ``B w - u``.
    """
    w = np.asarray(w, dtype=float)
    u = np.asarray(u, dtype=float)
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    if w.size != pd.p or u.size != pd.o or k.size != pd.o**2 or v.size != 2:
        raise ValueError("iterate dimensions do not match problem data")
    return pd.scalar_row(w, k, v), pd.degree_rows(w, u)


def _degree_gram(o: int) -> np.ndarray:
    # B B^T = (o - 2) I + J for the all-pairs incidence pattern
    return (o - 2.0) * np.eye(o) + np.ones((o, o))


def _m1_norm(z: np.ndarray, o: int) -> float:
    # sigma_max(M1) via the (1+o) x (1+o) Gram of M1 = [z^T/2; B]:
    # [[z.z/4, (Bz)^T/2], [Bz/2, B B^T]]; exact up to eigh accuracy.
    g = np.empty((1 + o, 1 + o))
    g[0, 0] = 0.25 * float(z @ z)
    bz = 0.5 * weight_degrees(z, o)
    g[0, 1:] = bz
    g[1:, 0] = bz
    g[1:, 1:] = _degree_gram(o)
    lam = np.linalg.eigvalsh(g)[-1]
    return float(np.sqrt(max(lam, 0.0)))


def _block_norms(z: np.ndarray, o: int):
    # M2 = [0; -I] and M3 = [2 b^T; 0] have exact norms 1 and 2 sqrt(o).
    # The v-block constant is pinned to 2: a safe overestimate of the
    # exact value sqrt(2), so step sizes derived from it stay strictly
    # inside the convergence-safe region.
    return _m1_norm(z, o), 1.0, 2.0 * np.sqrt(o), 2.0


def spectral_norms(pd: ProblemData):
    """Spectral-norm constants (sigma_max) of the constraint blocks M1..M4.

    M1 is computed from its small Gram matrix (equivalent to a dense
    SVD, verified against one in the tests) and always satisfies
    ``sigma_max(M1) <= kappa * o / 2 + sqrt(2 (o - 1))``.  M2 and M3 are
    the exact values 1 and ``2 sqrt(o)``.  The M4 constant is 2; see
    :func:`build_problem` internals for why it overestimates.
    """
    return pd.norm_m1, pd.norm_m2, pd.norm_m3, pd.norm_m4


def grass_block_norms(pd: ProblemData):
    """Spectral norms of the two-block grouping [(w, v), (k, u)].

    The first block matrix is [[z^T/2, a^T], [B, 0]] and the second is
    [[2 b^T, 0], [0, -I]] with exact norm ``2 sqrt(o)``.
    """
    o = pd.o
    g = np.empty((1 + o, 1 + o))
    g[0, 0] = 0.25 * float(pd.z @ pd.z) + float(pd.a @ pd.a)
    bz = 0.5 * weight_degrees(pd.z, o)
    g[0, 1:] = bz
    g[1:, 0] = bz
    g[1:, 1:] = _degree_gram(o)
    n1 = float(np.sqrt(max(np.linalg.eigvalsh(g)[-1], 0.0)))
    return n1, 2.0 * np.sqrt(o)


def dense_constraint_blocks(pd: ProblemData):
    """Materialize the dense blocks M1..M4 and the stacked matrix A.

    Intended for tests and diagnostics only; the solvers never form
    these.
    """
    o, p = pd.o, pd.p
    iu, ju = _pair_index(o)
    B = np.zeros((o, p))
    B[iu, np.arange(p)] = 1.0
    B[ju, np.arange(p)] = 1.0
    b = np.zeros(o * o)
    b[pd.b_indices] = 1.0
    M1 = np.vstack([0.5 * pd.z, B])
    M2 = np.vstack([np.zeros(o), -np.eye(o)])
    M3 = np.vstack([2.0 * b, np.zeros((o, o * o))])
    M4 = np.vstack([pd.a, np.zeros((o, 2))])
    A = np.hstack([M1, M2, M3, M4])
    return M1, M2, M3, M4, A


def smoothness_energy(c_obs: np.ndarray, w: np.ndarray) -> float:
    """Dirichlet energy tr(C L(w)) of the pair weights w; test oracle."""
    W = unvec_upper(w)
    L = np.diag(W.sum(axis=1)) - W
    return float(np.trace(c_obs @ L))
