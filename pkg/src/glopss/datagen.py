"""Synthetic graphs, smooth signals, and hidden-node masking.

Randomness is split into named substreams (graph, signals, noise, mask)
derived from a single 64-bit seed, so sweeps can vary one factor while
holding the others fixed and every output is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .graphs import Graph, ObservationMask

__all__ = [
    "GenSpec",
    "SignalSpec",
    "substream",
    "generate_graph",
    "generate_signals",
    "hide_nodes",
    "generate_connected_graph",
]

GRAPH_KINDS = ("gaussian", "erdos_renyi", "pref_attach")

# fixed purpose -> spawn-key mapping; changing it breaks reproducibility
_STREAMS = {"graph": 0, "signals": 1, "noise": 2, "mask": 3}

# eigenvalues below this fraction of the largest are treated as zero
# when inverting the Laplacian spectrum
_NULL_TOL = 1e-8


def substream(seed: int, purpose: str, salt: int = 0) -> np.random.Generator:
    """Named deterministic substream of the given seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_STREAMS[purpose], salt)))


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic graph.

    ``kind`` selects the family: ``gaussian`` places nodes uniformly in
    the unit square and keeps radial-basis weights
    ``exp(-dist^2 / (2 theta^2))`` that reach the threshold;
    ``erdos_renyi`` keeps each edge independently with ``edge_prob``;
    ``pref_attach`` grows from a small clique, attaching every new node
    to ``attach_count`` existing nodes drawn proportionally to degree.
    Kept edges in the last two families get unit weight.
    """

    kind: str
    m: int
    theta: float = 0.5
    threshold: float = 0.75
    edge_prob: float = 0.2
    attach_count: int = 1
    seed_clique: int = 3

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}; choose from {GRAPH_KINDS}")
        if self.m < 3:
            raise ValueError("need at least 3 nodes")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge probability must lie in [0, 1]")
        if self.theta <= 0:
            raise ValueError("kernel width must be positive")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("weight threshold must lie in [0, 1]")
        if self.attach_count < 1 or self.seed_clique < 2:
            raise ValueError("pref_attach needs attach_count >= 1 and seed_clique >= 2")


@dataclass(frozen=True)
class SignalSpec:
    """Sample count and additive-noise level for signal synthesis."""

    n: int
    noise_sigma: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one sample")
        if self.noise_sigma < 0:
            raise ValueError("noise level must be nonnegative")


def generate_graph(spec: GenSpec, seed: int, salt: int = 0) -> Graph:
    """Draw one graph from the spec'd family; deterministic under (spec, seed)."""
    rng = substream(seed, "graph", salt)
    m = spec.m
    if spec.kind == "gaussian":
        pos = rng.random((m, 2))
        W = np.exp(-squareform(pdist(pos, "sqeuclidean")) / (2.0 * spec.theta**2))
        W[W < spec.threshold] = 0.0
    elif spec.kind == "erdos_renyi":
        W = np.zeros((m, m))
        iu, ju = np.triu_indices(m, k=1)
        keep = rng.random(iu.size) < spec.edge_prob
        W[iu[keep], ju[keep]] = 1.0
        W = W + W.T
    else:  # pref_attach
        c = min(spec.seed_clique, m)
        W = np.zeros((m, m))
        W[:c, :c] = 1.0
        for node in range(c, m):
            degrees = W[:node, :node].sum(axis=1)
            probs = degrees / degrees.sum()
            n_edges = min(spec.attach_count, node)
            targets = rng.choice(node, size=n_edges, replace=False, p=probs)
            W[node, targets] = 1.0
            W[targets, node] = 1.0
    np.fill_diagonal(W, 0.0)
    return Graph(W)


def generate_connected_graph(spec: GenSpec, seed: int, max_tries: int = 200):
    """Resample the graph stream until the draw is connected.

    Returns ``(graph, n_tries)``; deterministic because every retry uses
    a salted substream indexed by the attempt number.
    """
    for attempt in range(max_tries):
        g = generate_graph(spec, seed, salt=attempt)
        if g.is_connected():
            return g, attempt + 1
    raise RuntimeError(f"no connected {spec.kind} graph with m={spec.m} in {max_tries} tries")


def generate_signals(g: Graph, spec: SignalSpec, seed: int) -> np.ndarray:
    """Smooth signals from the Laplacian spectrum, (m, n) with nodes as rows.

    Latent coefficients are independent Gaussians with variance equal
    to the inverse of each positive Laplacian eigenvalue (zero variance
    on the null space, i.e. the pseudo-inverse spectrum); the node-space
    signals pick up i.i.d. Gaussian noise with standard deviation
    ``noise_sigma``.
    """
    lam, V = np.linalg.eigh(g.laplacian())
    scale = np.zeros_like(lam)
    cutoff = _NULL_TOL * max(lam[-1], 0.0)
    positive = lam > cutoff
    scale[positive] = 1.0 / np.sqrt(lam[positive])
    Z = substream(seed, "signals").standard_normal((g.m, spec.n)) * scale[:, None]
    X = V @ Z
    if spec.noise_sigma > 0:
        X = X + spec.noise_sigma * substream(seed, "noise").standard_normal((g.m, spec.n))
    return X


def hide_nodes(g: Graph, X: np.ndarray, h: int, seed: int):
    """Hide a uniform random h-subset of nodes.

    Returns ``(mask, X_obs, W_obs)`` where ``X_obs`` keeps the observed
    rows in ascending node order and ``W_obs`` is the ground-truth
    observed-block adjacency for evaluation.
    """
    if not 0 <= h <= g.m - 2:
        raise ValueError(f"h must lie in [0, {g.m - 2}], got {h}")
    hidden = np.sort(substream(seed, "mask").choice(g.m, size=h, replace=False))
    mask = ObservationMask.from_hidden(g.m, hidden)
    X_obs = X[mask.observed]
    W_obs = g.weights[np.ix_(mask.observed, mask.observed)]
    return mask, X_obs, W_obs
