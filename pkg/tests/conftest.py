import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from glopss import (
    GenSpec,
    SignalSpec,
    build_problem,
    generate_connected_graph,
    generate_signals,
    hide_nodes,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_instance(kind="erdos_renyi", m=12, n=60, h=1, seed=0, sigma=0.5, **gen_kwargs):
    """Small end-to-end instance shared by solver and metric tests."""
    spec = GenSpec(kind, m=m, **gen_kwargs)
    g, _ = generate_connected_graph(spec, seed=seed)
    X = generate_signals(g, SignalSpec(n=n, noise_sigma=sigma), seed=seed)
    mask, X_obs, W_obs = hide_nodes(g, X, h=h, seed=seed)
    return g, X, mask, X_obs, W_obs


@pytest.fixture
def small_instance():
    g, X, mask, X_obs, W_obs = make_instance(m=12, n=60, h=1, seed=0)
    return g, X, mask, X_obs, W_obs, build_problem(X_obs)
