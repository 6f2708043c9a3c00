"""Linearized multi-block ADMM engines for the partially observed graph model.

All variants minimize the same objective

    f1(w) + f2(u) + f3(k) + f4(v)

subject to the linear constraints described in :mod:`glopss.problem`,
differing only in how the blocks are swept and which K penalty is active:

* ``glopss_cs`` / ``glopss_lr``: four-block Gauss-Seidel sweep
  w -> u -> k -> v -> dual, one linearized proximal-gradient step per
  block.  CS shrinks columns of K (group penalty), LR soft-thresholds
  its singular values (nuclear penalty).
* ``grass_cs`` / ``grass_lr``: classic two-block grouping
  (w, v) -> (k, u) -> dual with one linearized step per group; slower
  because the grouped step sizes are pinned to the larger block norms.
* ``ablation_no_hidden``: drops k and v and the scalar constraint row
  entirely, leaving the plain smooth-signal model  min f1 + f2
  s.t. B w = u.  Used as the hidden-agnostic baseline.

Step sizes follow the convergence-safe rule ``tau_i = safety /
sigma_max(M_i)^2``.  With that choice the iterates contract in the
block-diagonal M-norm, and the contraction constant ``c`` reported by
:func:`descent_constant` is positive for every penalty ``rho > 0``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .problem import (
    ProblemData,
    degree_adjoint,
    grass_block_norms,
    spectral_norms,
    weight_degrees,
)
from .prox import (
    RegParams,
    l21_norm,
    prox_edge_weights,
    prox_neg_log,
    prox_nonneg_linear,
    prox_trace_group_lasso,
    svt,
)
from .graphs import unvec_upper

__all__ = [
    "VARIANTS",
    "AdaptiveRho",
    "SolverConfig",
    "IterateState",
    "ConvergenceHistory",
    "SolveResult",
    "SolverDivergence",
    "default_step_sizes",
    "resolve_step_sizes",
    "initial_state",
    "step_glopss",
    "step_grass",
    "step_ablation",
    "adaptive_rho",
    "kkt_residual",
    "objective_value",
    "m_norm",
    "descent_constant",
    "solve",
]

VARIANTS = ("glopss_cs", "glopss_lr", "grass_cs", "grass_lr", "ablation_no_hidden")


class SolverDivergence(RuntimeError):
    """Raised when an iterate leaves the finite range."""


@dataclass(frozen=True)
class AdaptiveRho:
    """Residual-balancing penalty update; off unless attached to a config."""

    mu: float = 10.0
    tau_inc: float = 2.0
    tau_dec: float = 2.0
    rho_min: float = 1e-6
    rho_max: float = 1e6


@dataclass(frozen=True)
class SolverConfig:
    """Everything a solve needs besides the data.

    ``tau`` is either ``"auto"`` (resolve to ``safety / sigma_max^2`` of
    the per-variant constraint blocks) or an explicit tuple: four
    entries for the GLOPSS sweep, two for the grouped and ablation
    variants (extra entries are ignored).  ``use_analytic_bound``
    replaces the computed sigma_max(M1) with the closed-form bound
    ``kappa o / 2 + sqrt(2 (o - 1))``, which can be much looser.
    """

    reg: RegParams
    rho: float
    variant: str = "glopss_cs"
    tau: tuple | str = "auto"
    safety: float = 0.9
    use_analytic_bound: bool = False
    eps_primal: float = 1e-6
    eps_dual: float = 1e-6
    max_iter: int = 5000
    group_mode: str = "per_column"
    adaptive: AdaptiveRho | None = None
    divergence_limit: float = 1e12
    diag_every: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if not 0 < self.safety < 1:
            raise ValueError("safety factor must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.eps_primal <= 0 or self.eps_dual <= 0:
            raise ValueError("tolerances must be positive")
        if self.variant.endswith("_lr") and self.reg.gamma21 > 0:
            raise ValueError("low-rank variants require gamma21 == 0")
        if self.variant.endswith("_cs") and self.reg.gammastar > 0:
            raise ValueError("column-sparsity variants require gammastar == 0")
        if self.tau != "auto":
            tau = tuple(float(t) for t in self.tau)
            if len(tau) not in (2, 4) or any(t <= 0 for t in tau):
                raise ValueError("tau must be 'auto' or a tuple of 2 or 4 positive steps")
            object.__setattr__(self, "tau", tau)


@dataclass(frozen=True)
class IterateState:
    """One primal/dual iterate y = (w, u, k, v, lambda)."""

    w: np.ndarray
    u: np.ndarray
    k: np.ndarray
    v: np.ndarray
    lam: np.ndarray

    def is_finite(self, limit: float = np.inf) -> bool:
        for arr in (self.w, self.u, self.k, self.v, self.lam):
            if not np.all(np.isfinite(arr)) or np.abs(arr).max(initial=0.0) > limit:
                return False
        return True


@dataclass
class ConvergenceHistory:
    """Per-iteration diagnostics; one entry per completed iteration."""

    r_p: list = field(default_factory=list)
    r_d: list = field(default_factory=list)
    r_scalar: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    kkt: list = field(default_factory=list)
    m_step: list = field(default_factory=list)
    m_gap: list = field(default_factory=list)
    w_gap: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    time_ms: list = field(default_factory=list)
    weights: list = field(default_factory=list)

    def __len__(self):
        return len(self.r_p)


@dataclass(frozen=True)
class SolveResult:
    """Final iterate plus termination bookkeeping."""

    weights: np.ndarray  # (o, o) estimated observed adjacency
    hidden_effect: np.ndarray  # (o, o) estimated K matrix
    r: float
    state: IterateState
    status: str  # 'converged' | 'max_iter'
    converged: bool
    n_iter: int
    r_primal: float
    r_dual: float
    kkt: float
    tau: tuple
    rho_final: float
    descent_c: float


def auto_rho(pd: ProblemData) -> float:
    """Data-scaled default penalty, inversely proportional to the mean
    pairwise squared distance (the scalar constraint row's coefficient
    scale)."""
    zbar = float(pd.z.mean()) if pd.z.size else 1.0
    return 4.0 / max(zbar, 1e-12)


def default_step_sizes(pd: ProblemData, safety: float = 0.9):
    """Convergence-safe GLOPSS steps, ``safety / sigma_max(M_i)^2``."""
    if not 0 < safety < 1:
        raise ValueError("safety factor must lie in (0, 1)")
    n1, n2, n3, n4 = spectral_norms(pd)
    return (safety / n1**2, safety / n2**2, safety / n3**2, safety / n4**2)


def resolve_step_sizes(pd: ProblemData, cfg: SolverConfig):
    """Per-variable step tuple (w, u, k, v slots) for the configured variant.

    Grouped variants tie (w, v) and (k, u) to their block step; the
    ablation only uses the first two slots.
    """
    variant = cfg.variant
    if cfg.tau != "auto":
        t = cfg.tau
        if variant.startswith("glopss"):
            if len(t) != 4:
                raise ValueError("GLOPSS variants need four step sizes")
            return t
        return (t[0], t[1], t[1], t[0])
    if variant.startswith("glopss"):
        tau = default_step_sizes(pd, cfg.safety)
        if cfg.use_analytic_bound:
            bound = 0.5 * pd.kappa * pd.o + np.sqrt(2.0 * (pd.o - 1.0))
            tau = (cfg.safety / bound**2,) + tau[1:]
        return tau
    if variant.startswith("grass"):
        n1, n2 = grass_block_norms(pd)
        s1, s2 = cfg.safety / n1**2, cfg.safety / n2**2
        return (s1, s2, s2, s1)
    # ablation: w block against ||B|| = sqrt(2 (o - 1)), u block against 1
    return (cfg.safety / (2.0 * (pd.o - 1.0)), cfg.safety, 1.0, 1.0)


def initial_state(pd: ProblemData) -> IterateState:
    """Canonical start: small uniform adjacency so the log barrier is finite."""
    w = np.full(pd.p, 1.0 / pd.o)
    return IterateState(
        w=w,
        u=weight_degrees(w, pd.o),
        k=np.zeros(pd.o**2),
        v=np.zeros(2),
        lam=np.zeros(pd.o + 1),
    )


def _k_prox(pd, reg, kmid, step, lr: bool, group_mode: str):
    if lr:
        khat = kmid.copy()
        khat[pd.b_indices] -= 2.0 * step
        K = svt(khat.reshape(pd.o, pd.o, order="F"), step * reg.gammastar)
        return K.reshape(-1, order="F")
    return prox_trace_group_lasso(kmid, pd.b_indices, reg.gamma21, step, mode=group_mode)


def _step_glopss(pd, reg, rho, tau, y, lr, group_mode):
    t1, t2, t3, t4 = tau
    lam1, lam2 = y.lam[0], y.lam[1:]
    a = pd.a

    # w: gradient of the penalty at (w, u, k, v), then prox of f1
    c1 = pd.scalar_row(y.w, y.k, y.v) - lam1 / rho
    c2 = pd.degree_rows(y.w, y.u) - lam2 / rho
    gw = 0.5 * pd.z * c1 + degree_adjoint(c2, pd.o)
    w = prox_edge_weights(y.w - t1 * gw, pd.z, reg.beta, t1 / rho)

    # u: refresh the degree rows with the new w
    c2 = pd.degree_rows(w, y.u) - lam2 / rho
    u = prox_neg_log(y.u + t2 * c2, reg.alpha, t2 / rho)

    # k: the scalar row sees the new w; gradient is 2 c1 b
    c1 = pd.scalar_row(w, y.k, y.v) - lam1 / rho
    kmid = y.k.copy()
    kmid[pd.b_indices] -= 2.0 * t3 * c1
    k = _k_prox(pd, reg, kmid, t3 / rho, lr, group_mode)

    # v: scalar row with the new w and k
    c1 = pd.scalar_row(w, k, y.v) - lam1 / rho
    v = prox_nonneg_linear(y.v - t4 * c1 * a, t4 / rho, d=pd.d)

    lam = np.empty(pd.o + 1)
    lam[0] = lam1 - rho * pd.scalar_row(w, k, v)
    lam[1:] = lam2 - rho * pd.degree_rows(w, u)
    return IterateState(w=w, u=u, k=k, v=v, lam=lam)


def _step_grass(pd, reg, rho, tau, y, lr, group_mode):
    s1, s2 = tau[0], tau[1]
    lam1, lam2 = y.lam[0], y.lam[1:]
    a = pd.a

    # block (w, v) against the full residual
    c1 = pd.scalar_row(y.w, y.k, y.v) - lam1 / rho
    c2 = pd.degree_rows(y.w, y.u) - lam2 / rho
    gw = 0.5 * pd.z * c1 + degree_adjoint(c2, pd.o)
    w = prox_edge_weights(y.w - s1 * gw, pd.z, reg.beta, s1 / rho)
    v = prox_nonneg_linear(y.v - s1 * c1 * a, s1 / rho, d=pd.d)

    # block (k, u) with the fresh (w, v)
    c1 = pd.scalar_row(w, y.k, v) - lam1 / rho
    c2 = pd.degree_rows(w, y.u) - lam2 / rho
    kmid = y.k.copy()
    kmid[pd.b_indices] -= 2.0 * s2 * c1
    k = _k_prox(pd, reg, kmid, s2 / rho, lr, group_mode)
    u = prox_neg_log(y.u + s2 * c2, reg.alpha, s2 / rho)

    lam = np.empty(pd.o + 1)
    lam[0] = lam1 - rho * pd.scalar_row(w, k, v)
    lam[1:] = lam2 - rho * pd.degree_rows(w, u)
    return IterateState(w=w, u=u, k=k, v=v, lam=lam)


def _step_ablation(pd, reg, rho, tau, y):
    t1, t2 = tau[0], tau[1]
    lam2 = y.lam[1:]

    c2 = pd.degree_rows(y.w, y.u) - lam2 / rho
    gw = degree_adjoint(c2, pd.o)
    w = prox_edge_weights(y.w - t1 * gw, pd.z, reg.beta, t1 / rho)

    c2 = pd.degree_rows(w, y.u) - lam2 / rho
    u = prox_neg_log(y.u + t2 * c2, reg.alpha, t2 / rho)

    lam = np.zeros(pd.o + 1)
    lam[1:] = lam2 - rho * pd.degree_rows(w, u)
    return IterateState(w=w, u=u, k=np.zeros(pd.o**2), v=np.zeros(2), lam=lam)


def _step(pd, cfg, rho, tau, y):
    lr = cfg.variant.endswith("_lr")
    if cfg.variant.startswith("glopss"):
        return _step_glopss(pd, cfg.reg, rho, tau, y, lr, cfg.group_mode)
    if cfg.variant.startswith("grass"):
        return _step_grass(pd, cfg.reg, rho, tau, y, lr, cfg.group_mode)
    return _step_ablation(pd, cfg.reg, rho, tau, y)


def step_glopss(pd: ProblemData, cfg: SolverConfig, y: IterateState) -> IterateState:
    """One Gauss-Seidel sweep w -> u -> k -> v -> dual."""
    if not cfg.variant.startswith("glopss"):
        raise ValueError("config variant is not a GLOPSS variant")
    return _step(pd, cfg, cfg.rho, resolve_step_sizes(pd, cfg), y)


def step_grass(pd: ProblemData, cfg: SolverConfig, y: IterateState) -> IterateState:
    """One two-block sweep (w, v) -> (k, u) -> dual."""
    if not cfg.variant.startswith("grass"):
        raise ValueError("config variant is not a grouped variant")
    return _step(pd, cfg, cfg.rho, resolve_step_sizes(pd, cfg), y)


def step_ablation(pd: ProblemData, cfg: SolverConfig, y: IterateState) -> IterateState:
    """One sweep of the hidden-agnostic baseline (k and v pinned to zero)."""
    if cfg.variant != "ablation_no_hidden":
        raise ValueError("config variant is not the ablation")
    return _step(pd, cfg, cfg.rho, resolve_step_sizes(pd, cfg), y)


def adaptive_rho(r_primal: float, r_dual: float, rho: float, cfg: AdaptiveRho) -> float:
    """Residual-balancing penalty update.

    Inflate rho when the primal residual dominates by more than the
    ratio ``mu``, deflate when the dual residual dominates, clamp to
    ``[rho_min, rho_max]``.  The stored multipliers stay valid across
    the change; only the quadratic penalty weight moves.
    """
    if r_primal > cfg.mu * r_dual:
        rho = rho * cfg.tau_inc
    elif r_dual > cfg.mu * r_primal:
        rho = rho / cfg.tau_dec
    return float(min(max(rho, cfg.rho_min), cfg.rho_max))


def objective_value(pd: ProblemData, reg: RegParams, w, k, v) -> float:
    """Objective of the original program evaluated at (w, k, r = v[0]).

    Returns ``inf`` when some degree B w is nonpositive (outside the log
    barrier's domain), which can happen on early iterates.
    """
    deg = weight_degrees(w, pd.o)
    if np.any(deg <= 0.0):
        return np.inf
    val = (
        0.5 * float(pd.z @ w)
        + 2.0 * pd.trace_of_k(k)
        + float(v[0])
        + reg.beta * float(w @ w)
        - reg.alpha * float(np.log(deg).sum())
    )
    K = k.reshape(pd.o, pd.o, order="F")
    if reg.gamma21 > 0:
        val += reg.gamma21 * l21_norm(K)
    if reg.gammastar > 0:
        val += reg.gammastar * float(np.linalg.svd(K, compute_uv=False).sum())
    return val


def kkt_residual(
    pd: ProblemData,
    reg: RegParams,
    y: IterateState,
    ablation: bool = False,
    group_mode: str = "per_column",
) -> float:
    """Norm of the stacked optimality residual map.

    Each block contributes ``x - prox_f(x + M^T lambda)`` (zero exactly
    when the block's stationarity condition holds) and the constraint
    rows contribute ``A x``.  The K-block prox follows whichever penalty
    is active in ``reg``.
    """
    lam1, lam2 = y.lam[0], y.lam[1:]
    e_u = y.u - prox_neg_log(y.u - lam2, reg.alpha, 1.0)
    if ablation:
        e_w = y.w - prox_edge_weights(y.w + degree_adjoint(lam2, pd.o), pd.z, reg.beta, 1.0)
        parts = [e_w, e_u, pd.degree_rows(y.w, y.u)]
    else:
        e_w = y.w - prox_edge_weights(
            y.w + 0.5 * pd.z * lam1 + degree_adjoint(lam2, pd.o), pd.z, reg.beta, 1.0
        )
        shifted = y.k.copy()
        shifted[pd.b_indices] += 2.0 * lam1
        e_k = y.k - _k_prox(pd, reg, shifted, 1.0, lr=reg.gammastar > 0, group_mode=group_mode)
        e_v = y.v - prox_nonneg_linear(y.v + lam1 * pd.a, 1.0, d=pd.d)
        s_row, d_rows = pd.scalar_row(y.w, y.k, y.v), pd.degree_rows(y.w, y.u)
        parts = [e_w, e_u, e_k, e_v, np.array([s_row]), d_rows]
    return float(np.sqrt(sum(float(p @ p) for p in parts)))


def m_norm(pd: ProblemData, cfg: SolverConfig, tau, rho: float, y: IterateState) -> float:
    """Block-diagonal metric norm used by the descent diagnostics.

    Matrix-free: the norm needs only ``M_i x_i`` products, never the
    dense Gram blocks.
    """
    return float(np.sqrt(max(_m_norm_sq(pd, cfg.variant, tau, rho, y), 0.0)))


def _m_norm_sq(pd, variant, tau, rho, y):
    w2, u2 = float(y.w @ y.w), float(y.u @ y.u)
    k2, v2 = float(y.k @ y.k), float(y.v @ y.v)
    lam2 = float(y.lam @ y.lam)
    bw = weight_degrees(y.w, pd.o)
    if variant.startswith("glopss"):
        t1, t2, t3, t4 = tau
        m1w = (0.5 * float(pd.z @ y.w)) ** 2 + float(bw @ bw)
        m3k = 4.0 * pd.trace_of_k(y.k) ** 2
        return (
            rho / t1 * w2
            - rho * m1w
            + (rho / t2 - rho) * u2
            + rho / t3 * k2
            - rho * m3k
            + rho / t4 * v2
            + lam2 / rho
        )
    if variant.startswith("grass"):
        s1, s2 = tau[0], tau[1]
        n1x = (0.5 * float(pd.z @ y.w) + float(pd.a @ y.v)) ** 2 + float(bw @ bw)
        return rho / s1 * (w2 + v2) - rho * n1x + rho / s2 * (k2 + u2) + lam2 / rho
    t1, t2 = tau[0], tau[1]
    lam22 = float(y.lam[1:] @ y.lam[1:])
    return rho / t1 * w2 - rho * float(bw @ bw) + rho / t2 * u2 + lam22 / rho


def _state_diff(a: IterateState, b: IterateState) -> IterateState:
    return IterateState(w=a.w - b.w, u=a.u - b.u, k=a.k - b.k, v=a.v - b.v, lam=a.lam - b.lam)


def descent_constant(pd: ProblemData, tau, rho: float) -> float:
    """Contraction constant of the M-norm descent inequality.

    ``min_i (rho / tau_i - rho sigma_i^2)`` together with
    ``1/rho - mu`` where ``mu = (1 + tau_4 sigma_4^2) / (2 rho)``.
    Positive whenever the steps sit strictly inside their bounds.
    """
    t1, t2, t3, t4 = tau
    n = spectral_norms(pd)
    mu = (0.5 + 0.5 * t4 * n[3] ** 2) / rho
    terms = [rho / t - rho * s**2 for t, s in zip((t1, t2, t3, t4), n)]
    terms.append(1.0 / rho - mu)
    return float(min(terms))


def solve(
    pd: ProblemData,
    cfg: SolverConfig,
    init: IterateState | None = None,
    reference: IterateState | None = None,
    track_weights: bool = False,
):
    """Iterate the configured variant until both residuals pass tolerance.

    Stops when the full constraint residual ||A x|| falls below
    ``eps_primal`` and the dual residual ``||rho B^T (u+ - u)||`` below
    ``eps_dual``, or after ``max_iter`` sweeps (flagged, partial result
    returned).  Non-finite iterates raise :class:`SolverDivergence`.

    Parameters
    ----------
    init : IterateState, optional
        Warm start; defaults to the canonical strictly feasible point.
    reference : IterateState, optional
        When given, per-iteration M-norm and weight gaps against it are
        recorded in the history.
    track_weights : bool
        Store a copy of w at every iteration (memory scales with
        max_iter * p).

    Returns
    -------
    (SolveResult, ConvergenceHistory)
    """
    tau = resolve_step_sizes(pd, cfg)
    rho = float(cfg.rho)
    ablation = cfg.variant == "ablation_no_hidden"
    y = init if init is not None else initial_state(pd)
    hist = ConvergenceHistory()
    c_value = descent_constant(pd, tau, rho) if cfg.variant.startswith("glopss") else float("nan")

    converged = False
    r_full = r_d = kkt = obj = float("nan")
    for it in range(cfg.max_iter):
        t0 = time.perf_counter()
        y_new = _step(pd, cfg, rho, tau, y)
        if not y_new.is_finite(cfg.divergence_limit):
            raise SolverDivergence(
                f"{cfg.variant} diverged at iteration {it} (non-finite or > {cfg.divergence_limit:g})"
            )

        s_row = 0.0 if ablation else pd.scalar_row(y_new.w, y_new.k, y_new.v)
        d_rows = pd.degree_rows(y_new.w, y_new.u)
        r_deg = float(np.linalg.norm(d_rows))
        r_scalar = abs(s_row)
        r_full = float(np.hypot(r_deg, r_scalar))
        r_d = rho * float(np.linalg.norm(degree_adjoint(y_new.u - y.u, pd.o)))

        diff = _state_diff(y, y_new)
        m_step = float(np.sqrt(max(_m_norm_sq(pd, cfg.variant, tau, rho, diff), 0.0)))
        at_tolerance = r_full <= cfg.eps_primal and r_d <= cfg.eps_dual
        # kkt and objective are the expensive diagnostics (an extra prox or
        # SVD); refresh them every diag_every sweeps and always on the last
        if it % cfg.diag_every == 0 or at_tolerance or it == cfg.max_iter - 1:
            kkt = kkt_residual(pd, cfg.reg, y_new, ablation=ablation, group_mode=cfg.group_mode)
            obj = objective_value(pd, cfg.reg, y_new.w, y_new.k, y_new.v)

        hist.r_p.append(r_deg)
        hist.r_d.append(r_d)
        hist.r_scalar.append(r_scalar)
        hist.objective.append(obj)
        hist.kkt.append(kkt)
        hist.m_step.append(m_step)
        hist.rho.append(rho)
        if reference is not None:
            gap = _state_diff(y_new, reference)
            hist.m_gap.append(float(np.sqrt(max(_m_norm_sq(pd, cfg.variant, tau, rho, gap), 0.0))))
            hist.w_gap.append(float(np.linalg.norm(y_new.w - reference.w)))
        if track_weights:
            hist.weights.append(y_new.w.copy())
        hist.time_ms.append((time.perf_counter() - t0) * 1e3)

        y = y_new
        if at_tolerance:
            converged = True
            break
        if cfg.adaptive is not None:
            rho = adaptive_rho(r_full, r_d, rho, cfg.adaptive)

    result = SolveResult(
        weights=unvec_upper(y.w),
        hidden_effect=y.k.reshape(pd.o, pd.o, order="F"),
        r=float(y.v[0]),
        state=y,
        status="converged" if converged else "max_iter",
        converged=converged,
        n_iter=len(hist),
        r_primal=r_full,
        r_dual=r_d,
        kkt=kkt,
        tau=tau,
        rho_final=rho,
        descent_c=c_value,
    )
    return result, hist
