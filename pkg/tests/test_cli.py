import json
from pathlib import Path

import numpy as np
import pytest

from glopss.cli import EXIT_BAD_INPUT, EXIT_IO, EXIT_OK, main
from glopss.fileio import read_edge_list, read_json, read_signals_csv


def run(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    code = run(
        "generate", "--kind", "erdos_renyi", "--m", "12", "--n", "50", "--h", "1",
        "--seed", "5", "--out", str(out),
    )
    assert code == EXIT_OK
    return out


class TestGenerate:
    def test_outputs_exist(self, dataset):
        for name in ("graph.edges", "signals.csv", "observed_signals.csv",
                     "truth_observed.edges", "mask.json", "manifest.json"):
            assert (dataset / name).exists()

    def test_shapes_consistent(self, dataset):
        X = read_signals_csv(dataset / "signals.csv")
        X_obs = read_signals_csv(dataset / "observed_signals.csv")
        mask = read_json(dataset / "mask.json")
        assert X.shape == (12, 50)
        assert X_obs.shape == (11, 50)
        assert len(mask["hidden"]) == 1 and mask["seed"] == 5

    def test_byte_identical_rerun(self, dataset, tmp_path):
        code = run("generate", "--kind", "erdos_renyi", "--m", "12", "--n", "50",
                   "--h", "1", "--seed", "5", "--out", str(tmp_path))
        assert code == EXIT_OK
        for name in ("graph.edges", "signals.csv", "observed_signals.csv",
                     "truth_observed.edges", "mask.json"):
            assert (tmp_path / name).read_bytes() == (dataset / name).read_bytes()

    def test_manifest_regenerates_everything(self, dataset, tmp_path):
        # the manifest alone carries every generation parameter
        man = read_json(dataset / "manifest.json")
        code = run(
            "generate", "--kind", man["kind"], "--m", str(man["m"]), "--n", str(man["n"]),
            "--h", str(man["h"]), "--sigma", str(man["sigma"]), "--seed", str(man["seed"]),
            "--edge-prob", str(man["edge_prob"]), "--theta", str(man["theta"]),
            "--threshold", str(man["threshold"]), "--out", str(tmp_path),
        )
        assert code == EXIT_OK
        assert (tmp_path / "graph.edges").read_bytes() == (dataset / "graph.edges").read_bytes()


class TestSolve:
    def test_solve_writes_artifacts(self, dataset, tmp_path):
        code = run(
            "solve", "--signals", str(dataset / "observed_signals.csv"), "--variant",
            "glopss_cs", "--gamma", "2.5", "--max-iter", "800", "--eps-primal", "1e-4",
            "--eps-dual", "1e-4", "--diag-every", "50", "--out", str(tmp_path),
        )
        assert code == EXIT_OK
        est = read_edge_list(tmp_path / "estimate.edges", m=11)
        assert est.m == 11
        summary = read_json(tmp_path / "summary.json")
        assert summary["iterations"] <= 800
        assert len(summary["tau"]) == 4
        assert summary["spectral_norms"][3] == 2.0
        hist = (tmp_path / "history.csv").read_text().splitlines()
        assert hist[0] == "iter,r_p,r_d,r_scalar,objective,kkt,m_step,rho,time_ms"
        assert len(hist) == summary["iterations"] + 1

    def test_variant_routing_lr(self, dataset, tmp_path):
        code = run(
            "solve", "--signals", str(dataset / "observed_signals.csv"), "--variant",
            "glopss_lr", "--gamma", "1.0", "--max-iter", "50", "--out", str(tmp_path),
        )
        assert code == EXIT_OK
        summary = read_json(tmp_path / "summary.json")
        assert summary["gammastar"] == 1.0 and summary["gamma21"] == 0.0

    def test_tau_auto_resolves_to_spectral_rule(self, dataset, tmp_path):
        code = run(
            "solve", "--signals", str(dataset / "observed_signals.csv"), "--max-iter", "20",
            "--safety", "0.9", "--out", str(tmp_path),
        )
        assert code == EXIT_OK
        summary = read_json(tmp_path / "summary.json")
        norms = summary["spectral_norms"]
        for tau, sigma in zip(summary["tau"], norms):
            assert tau == pytest.approx(0.9 / sigma**2)

    def test_missing_signals_is_io_error(self, tmp_path):
        assert run("solve", "--signals", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path)) == EXIT_IO

    def test_bad_variant_rejected(self, dataset, tmp_path):
        code = run("solve", "--signals", str(dataset / "observed_signals.csv"),
                   "--variant", "glopss_cs", "--gamma", "-1", "--out", str(tmp_path))
        assert code == EXIT_BAD_INPUT


class TestEval:
    def test_eval_metrics(self, dataset, tmp_path):
        run_dir = tmp_path / "run"
        assert run(
            "solve", "--signals", str(dataset / "observed_signals.csv"), "--gamma", "2.5",
            "--max-iter", "800", "--eps-primal", "1e-4", "--eps-dual", "1e-4",
            "--diag-every", "50", "--out", str(run_dir),
        ) == EXIT_OK
        out = tmp_path / "metrics"
        code = run(
            "eval", "--estimate", str(run_dir / "estimate.edges"),
            "--truth", str(dataset / "truth_observed.edges"),
            "--full-graph", str(dataset / "graph.edges"),
            "--mask", str(dataset / "mask.json"),
            "--signals", str(dataset / "observed_signals.csv"),
            "--out", str(out),
        )
        assert code == EXIT_OK
        metrics = read_json(out / "metrics.json")
        assert 0.0 <= metrics["f_score"] <= 1.0
        assert metrics["frobenius_error"] >= 0.0
        assert metrics["xi"] == pytest.approx(11 / 12)
        assert metrics["delta_hat"] > 0


class TestConfigFile:
    def test_flags_override_file(self, dataset, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("variant = glopss_lr\ngamma = 1.5\nmax-iter = 30\n")
        code = run(
            "solve", "--signals", str(dataset / "observed_signals.csv"),
            "--config", str(cfg), "--gamma", "0.5", "--out", str(tmp_path),
        )
        assert code == EXIT_OK
        summary = read_json(tmp_path / "summary.json")
        assert summary["variant"] == "glopss_lr"  # from file
        assert summary["gammastar"] == 0.5  # flag wins over file
        assert summary["iterations"] <= 30

    def test_unknown_key_rejected(self, dataset, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("no-such-flag = 1\n")
        code = run("solve", "--signals", str(dataset / "observed_signals.csv"),
                   "--config", str(cfg), "--out", str(tmp_path))
        assert code == EXIT_BAD_INPUT


class TestBenchCommand:
    def test_complexity_smoke(self, tmp_path, monkeypatch):
        import glopss.cli as cli

        def tiny_complexity(seed=0, jobs=1):
            from glopss.bench import complexity_experiment

            return complexity_experiment(o_values=(8, 12), variants=("glopss_cs",),
                                         iters=20, seed=seed, jobs=jobs)

        monkeypatch.setattr(cli, "complexity_experiment", tiny_complexity)
        code = run("bench", "--experiment", "complexity", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert (tmp_path / "complexity.csv").exists()
        manifest = read_json(tmp_path / "manifest.json")
        assert "fit_exponents" in manifest
