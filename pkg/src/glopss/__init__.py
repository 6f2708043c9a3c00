"""Topology inference for partially observed graphs from smooth signals.

The package centers on :class:`~glopss.estimator.GraphLearner`, a
scikit-learn style estimator wrapping a family of linearized multi-block
ADMM solvers with closed-form proximal steps, provably safe default step
sizes, and KKT-based convergence certificates.  Lower-level entry points
(:func:`build_problem`, :func:`solve`, the proximal operators, synthetic
data generators, and recovery metrics) are exported for direct use.
"""

from .datagen import (
    GenSpec,
    SignalSpec,
    generate_connected_graph,
    generate_graph,
    generate_signals,
    hide_nodes,
)
from .estimator import GraphLearner
from .graphs import Graph, ObservationMask, laplacian, partition, unvec_upper, vec_upper
from .metrics import (
    EdgeRecoveryReport,
    RecoveryDiagnostics,
    effective_laplacian,
    f_score,
    recovery_error,
    suboptimality,
)
from .problem import (
    ProblemData,
    build_problem,
    constraint_residual,
    degree_adjoint,
    spectral_norms,
    weight_degrees,
)
from .prox import (
    RegParams,
    prox_edge_weights,
    prox_neg_log,
    prox_nonneg_linear,
    prox_trace_group_lasso,
    svt,
)
from .solver import (
    AdaptiveRho,
    ConvergenceHistory,
    IterateState,
    SolveResult,
    SolverConfig,
    SolverDivergence,
    adaptive_rho,
    default_step_sizes,
    descent_constant,
    initial_state,
    kkt_residual,
    m_norm,
    objective_value,
    solve,
    step_glopss,
    step_grass,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveRho",
    "ConvergenceHistory",
    "EdgeRecoveryReport",
    "GenSpec",
    "Graph",
    "GraphLearner",
    "IterateState",
    "ObservationMask",
    "ProblemData",
    "RecoveryDiagnostics",
    "RegParams",
    "SignalSpec",
    "SolveResult",
    "SolverConfig",
    "SolverDivergence",
    "adaptive_rho",
    "build_problem",
    "constraint_residual",
    "default_step_sizes",
    "degree_adjoint",
    "descent_constant",
    "effective_laplacian",
    "f_score",
    "generate_connected_graph",
    "generate_graph",
    "generate_signals",
    "hide_nodes",
    "initial_state",
    "kkt_residual",
    "laplacian",
    "m_norm",
    "objective_value",
    "partition",
    "prox_edge_weights",
    "prox_neg_log",
    "prox_nonneg_linear",
    "prox_trace_group_lasso",
    "recovery_error",
    "solve",
    "spectral_norms",
    "step_glopss",
    "step_grass",
    "suboptimality",
    "svt",
    "unvec_upper",
    "vec_upper",
    "weight_degrees",
]
