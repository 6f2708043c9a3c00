"""Command-line experiment harness.

Subcommands: ``generate`` (synthetic data to disk), ``solve`` (one
topology inference on saved signals), ``bench`` (the experiment
protocols), ``eval`` (recovery metrics for saved estimates).  Flags
override values from an optional flat ``key = value`` config file.

Exit codes: 0 success, 2 bad input, 3 solver divergence, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import fileio
from .bench import (
    BASE_ALPHA,
    BASE_BETA,
    ExperimentSpec,
    accuracy_sweep,
    complexity_experiment,
    convergence_experiment,
    median_f_table,
    recovery_experiment,
)
from .datagen import GenSpec, SignalSpec, generate_connected_graph, generate_graph, generate_signals, hide_nodes
from .estimator import resolve_regularization
from .graphs import laplacian
from .metrics import f_score, recovery_error
from .problem import build_problem, spectral_norms
from .prox import RegParams
from .solver import AdaptiveRho, SolverConfig, SolverDivergence, auto_rho, solve

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_DIVERGED = 3
EXIT_IO = 4

VARIANT_CHOICES = ("glopss_cs", "glopss_lr", "grass_cs", "grass_lr", "ablation_no_hidden")


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Merge a flat key=value file under explicit flags (flags win)."""
    if not getattr(args, "config", None):
        return args
    file_values = fileio.parse_config_file(args.config)
    passed = {tok.split("=", 1)[0] for tok in args._argv if tok.startswith("--")}
    for key, raw in file_values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ValueError(f"unknown config key {key!r}")
        if f"--{key}" not in passed:
            setattr(args, dest, raw)
    return args


def _gen_spec(args) -> GenSpec:
    return GenSpec(
        kind=args.kind,
        m=int(args.m),
        theta=float(args.theta),
        threshold=float(args.threshold),
        edge_prob=float(args.edge_prob),
        attach_count=int(args.attach_count),
    )


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    spec = _gen_spec(args)
    sig = SignalSpec(n=int(args.n), noise_sigma=float(args.sigma))
    seed = int(args.seed)
    if args.allow_disconnected:
        g, tries = generate_graph(spec, seed), 1
    else:
        g, tries = generate_connected_graph(spec, seed)
    X = generate_signals(g, sig, seed)
    mask, X_obs, W_obs = hide_nodes(g, X, int(args.h), seed)

    fileio.write_edge_list(out / "graph.edges", g.weights, comment="full ground-truth graph")
    fileio.write_edge_list(out / "truth_observed.edges", W_obs, comment="observed-block ground truth")
    fileio.write_signals_csv(out / "signals.csv", X)
    fileio.write_signals_csv(out / "observed_signals.csv", X_obs)
    fileio.write_mask_json(out / "mask.json", mask, seed=seed)
    fileio.write_json(
        out / "manifest.json",
        {
            "command": "generate",
            "kind": spec.kind,
            "m": spec.m,
            "n": sig.n,
            "h": int(args.h),
            "sigma": sig.noise_sigma,
            "seed": seed,
            "theta": spec.theta,
            "threshold": spec.threshold,
            "edge_prob": spec.edge_prob,
            "attach_count": spec.attach_count,
            "connected": g.is_connected(),
            "resample_tries": tries,
        },
    )
    print(f"wrote {out}/graph.edges signals.csv observed_signals.csv mask.json manifest.json")
    return EXIT_OK


def _solver_config(args, pd) -> SolverConfig:
    reg = resolve_regularization(pd.z, args.alpha, args.beta, args.gamma, args.variant)
    tau = "auto" if args.tau == "auto" else tuple(float(t) for t in args.tau.split(","))
    adaptive = AdaptiveRho(mu=float(args.adapt_mu)) if args.adaptive else None
    return SolverConfig(
        reg=reg,
        rho=auto_rho(pd) if args.rho == "auto" else float(args.rho),
        variant=args.variant,
        tau=tau,
        safety=float(args.safety),
        use_analytic_bound=args.analytic_bound,
        eps_primal=float(args.eps_primal),
        eps_dual=float(args.eps_dual),
        max_iter=int(args.max_iter),
        group_mode=args.group_mode,
        adaptive=adaptive,
        diag_every=int(args.diag_every),
    )


def cmd_solve(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    X_obs = fileio.read_signals_csv(args.signals)
    if not args.raw_scale:
        X_obs = X_obs / np.sqrt(X_obs.shape[1])
    pd = build_problem(X_obs)
    cfg = _solver_config(args, pd)
    t0 = time.perf_counter()
    result, history = solve(pd, cfg)
    wall = time.perf_counter() - t0

    fileio.write_edge_list(out / "estimate.edges", result.weights, comment="estimated adjacency")
    fileio.write_matrix_csv(out / "hidden_effect.csv", result.hidden_effect)
    fileio.write_history_csv(out / "history.csv", history)
    norms = spectral_norms(pd)
    fileio.write_json(
        out / "summary.json",
        {
            "command": "solve",
            "variant": cfg.variant,
            "status": result.status,
            "converged": result.converged,
            "iterations": result.n_iter,
            "r_primal": result.r_primal,
            "r_dual": result.r_dual,
            "kkt": result.kkt,
            "r": result.r,
            "rho": cfg.rho,
            "rho_final": result.rho_final,
            "tau": list(result.tau),
            "spectral_norms": list(norms),
            "descent_c": None if np.isnan(result.descent_c) else result.descent_c,
            "alpha": cfg.reg.alpha,
            "beta": cfg.reg.beta,
            "gamma21": cfg.reg.gamma21,
            "gammastar": cfg.reg.gammastar,
            "wall_time_s": wall,
        },
    )
    print(
        f"{cfg.variant}: {result.status} after {result.n_iter} iterations "
        f"(r_p={result.r_primal:.3e}, r_d={result.r_dual:.3e}, kkt={result.kkt:.3e})"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    est = fileio.read_edge_list(args.estimate)
    truth = fileio.read_edge_list(args.truth, m=est.m)
    rep = f_score(truth.weights, est.weights, rel_threshold=float(args.edge_threshold))
    payload = {
        "command": "eval",
        "f_score": rep.f_score,
        "precision": rep.precision,
        "recall": rep.recall,
        "edge_threshold": rep.edge_threshold,
    }
    if args.full_graph and args.mask:
        full = fileio.read_edge_list(args.full_graph)
        mask = fileio.read_mask_json(args.mask)
        X_obs = fileio.read_signals_csv(args.signals) if args.signals else None
        diag = recovery_error(laplacian(est.weights), laplacian(full), mask, X_obs=X_obs)
        payload.update(
            frobenius_error=diag.frobenius_error,
            xi=diag.xi,
            delta_hat=None if np.isnan(diag.delta_hat) else diag.delta_hat,
            s_o=diag.s_o,
        )
    fileio.write_json(out / "metrics.json", payload)
    print(f"F-score {rep.f_score:.4f} (precision {rep.precision:.4f}, recall {rep.recall:.4f})")
    return EXIT_OK


def cmd_bench(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = int(args.seeds)
    jobs = int(args.jobs)
    base_seed = int(args.seed)
    manifest = {
        "command": "bench",
        "experiment": args.experiment,
        "seeds": seeds,
        "base_seed": base_seed,
        "alpha": BASE_ALPHA,
        "beta": BASE_BETA,
        "jobs": jobs,
    }

    if args.experiment == "convergence":
        spec = ExperimentSpec(
            gen=GenSpec("erdos_renyi", m=21, edge_prob=0.2),
            sig=SignalSpec(n=100, noise_sigma=0.5),
            h_values=(1,),
            trials=seeds,
            base_seed=base_seed,
            alpha=0.5,
            beta=1.0,
        )
        rows, medians = convergence_experiment(
            spec, variants=("glopss_lr", "grass_lr"), tol=float(args.tol), jobs=jobs
        )
        fileio.write_table_csv(
            out / "iterations.csv",
            ("seed", "variant", "iters_to_tol", "final_gap", "kkt", "time_ms_per_iter"),
            [
                (r["seed"], r["variant"], r["iters_to_tol"], r["final_gap"], r["kkt"],
                 r["time_ms_per_iter"])
                for r in rows
            ],
        )
        manifest["medians"] = {k: v for k, v in medians.items()}
        manifest.update(alpha=spec.alpha, beta=spec.beta, gamma=1.0, rho=spec.rho, tol=float(args.tol))
    elif args.experiment in ("hidden", "noise"):
        if args.experiment == "hidden":
            spec = ExperimentSpec(
                gen=GenSpec("gaussian", m=25),
                sig=SignalSpec(n=100, noise_sigma=0.5),
                h_values=(1, 2, 3, 4, 5),
                trials=seeds,
                base_seed=base_seed,
            )
            rows, chosen = accuracy_sweep(spec, sweep="hidden", jobs=jobs)
            key = "h"
        else:
            spec = ExperimentSpec(
                gen=GenSpec("erdos_renyi", m=25, edge_prob=0.2),
                sig=SignalSpec(n=100, noise_sigma=0.5),
                h_values=(1,),
                trials=seeds,
                base_seed=base_seed,
            )
            rows, chosen = accuracy_sweep(spec, sweep="noise", sigmas=(0.1, 0.5, 1.0), jobs=jobs)
            key = "sigma"
        fileio.write_table_csv(
            out / f"fscore_vs_{key}.csv",
            (key, "seed", "variant", "gamma", "f_score", "precision", "recall", "n_iter"),
            [
                (r[key], r["seed"], r["variant"], r["gamma"], r["f_score"], r["precision"],
                 r["recall"], r["n_iter"])
                for r in rows
            ],
        )
        medians = median_f_table(rows, key=key)
        fileio.write_table_csv(
            out / f"median_fscore_vs_{key}.csv",
            ("variant", key, "median_f"),
            [(v, p, f) for (v, p), f in medians.items()],
        )
        manifest["tuned_gamma"] = {f"{v}|{h}|{s}": g for (v, h, s), g in chosen.items()}
    elif args.experiment == "recovery":
        rows, medians = recovery_experiment(
            GenSpec("erdos_renyi", m=30, edge_prob=0.2),
            trials=seeds,
            base_seed=base_seed,
            jobs=jobs,
        )
        fileio.write_table_csv(
            out / "recovery.csv",
            ("h", "n", "seed", "frobenius_error", "xi", "delta_hat", "s_o"),
            [
                (r["h"], r["n"], r["seed"], r["frobenius_error"], r["xi"], r["delta_hat"], r["s_o"])
                for r in rows
            ],
        )
        manifest["medians"] = {f"h{h}_n{n}": v for (h, n), v in medians.items()}
    elif args.experiment == "complexity":
        rows, fits = complexity_experiment(seed=base_seed, jobs=jobs)
        fileio.write_table_csv(
            out / "complexity.csv",
            ("variant", "o", "median_iter_ms"),
            [(r["variant"], r["o"], r["median_iter_ms"]) for r in rows],
        )
        manifest["fit_exponents"] = fits
    else:
        raise ValueError(f"unknown experiment {args.experiment!r}")

    fileio.write_json(out / "manifest.json", manifest)
    print(f"bench {args.experiment}: tables written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glopss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write synthetic graph, signals and mask")
    gen.add_argument("--kind", choices=("gaussian", "erdos_renyi", "pref_attach"),
                     default="erdos_renyi")
    gen.add_argument("--m", default=21, help="node count")
    gen.add_argument("--n", default=100, help="sample count")
    gen.add_argument("--h", default=1, help="hidden-node count")
    gen.add_argument("--sigma", default=0.5, help="noise level")
    gen.add_argument("--theta", default=0.5)
    gen.add_argument("--threshold", default=0.75)
    gen.add_argument("--edge-prob", dest="edge_prob", default=0.2)
    gen.add_argument("--attach-count", dest="attach_count", default=1)
    gen.add_argument("--allow-disconnected", action="store_true")

    sol = sub.add_parser("solve", help="infer topology from observed signals")
    sol.add_argument("--signals", required=True, help="observed signals CSV (nodes x samples)")
    sol.add_argument("--variant", choices=VARIANT_CHOICES, default="glopss_cs")
    sol.add_argument("--alpha", default="scale")
    sol.add_argument("--beta", default="scale")
    sol.add_argument("--gamma", default="scale")
    sol.add_argument("--rho", default="auto")
    sol.add_argument("--tau", default="auto", help='"auto" or comma-separated step sizes')
    sol.add_argument("--safety", default=0.9)
    sol.add_argument("--analytic-bound", dest="analytic_bound", action="store_true")
    sol.add_argument("--eps-primal", dest="eps_primal", default=1e-6)
    sol.add_argument("--eps-dual", dest="eps_dual", default=1e-6)
    sol.add_argument("--max-iter", dest="max_iter", default=5000)
    sol.add_argument("--group-mode", dest="group_mode", choices=("per_column", "global"),
                     default="per_column")
    sol.add_argument("--adaptive", action="store_true", help="residual-balancing rho updates")
    sol.add_argument("--adapt-mu", dest="adapt_mu", default=10.0)
    sol.add_argument("--diag-every", dest="diag_every", default=1)
    sol.add_argument("--raw-scale", dest="raw_scale", action="store_true",
                     help="skip the 1/sqrt(n) signal preconditioning")

    ev = sub.add_parser("eval", help="edge-recovery metrics for a saved estimate")
    ev.add_argument("--estimate", required=True)
    ev.add_argument("--truth", required=True, help="observed-block ground-truth edge list")
    ev.add_argument("--full-graph", dest="full_graph", help="full ground-truth edge list")
    ev.add_argument("--mask", help="mask JSON (for effective-Laplacian error)")
    ev.add_argument("--signals", help="observed signals CSV (for identifiability)")
    ev.add_argument("--edge-threshold", dest="edge_threshold", default=1e-4)

    ben = sub.add_parser("bench", help="run an experiment protocol")
    ben.add_argument("--experiment", choices=("convergence", "hidden", "noise", "recovery",
                                              "complexity"), required=True)
    ben.add_argument("--seeds", default=10, help="number of trials")
    ben.add_argument("--jobs", default=1, help="parallel workers (1 = serial)")
    ben.add_argument("--tol", default=1e-5, help="suboptimality tolerance (convergence)")

    for p in (gen, sol, ev, ben):
        p.add_argument("--seed", default=0, help="base RNG seed")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--config", help="flat key = value config file (flags override)")
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._argv = argv
        args = _apply_config_file(args, parser)
        handler = {
            "generate": cmd_generate,
            "solve": cmd_solve,
            "eval": cmd_eval,
            "bench": cmd_bench,
        }[args.command]
        return handler(args)
    except SolverDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, IOError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
