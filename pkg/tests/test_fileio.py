import numpy as np
import pytest

from glopss import (
    ObservationMask,
    RegParams,
    SolverConfig,
    build_problem,
    solve,
)
from glopss.fileio import (
    HISTORY_COLUMNS,
    parse_config_file,
    read_edge_list,
    read_json,
    read_mask_json,
    read_matrix_csv,
    read_signals_csv,
    write_edge_list,
    write_history_csv,
    write_json,
    write_mask_json,
    write_matrix_csv,
    write_signals_csv,
    write_table_csv,
)

from conftest import make_instance


class TestEdgeList:
    def test_round_trip(self, tmp_path, rng):
        W = np.triu(rng.random((6, 6)) * (rng.random((6, 6)) < 0.5), 1)
        W = W + W.T
        path = tmp_path / "g.edges"
        write_edge_list(path, W)
        g = read_edge_list(path, m=6)
        assert np.allclose(g.weights, W, atol=0)

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "g.edges"
        path.write_text("# header\n\n0 1 2.5  # trailing\n1 2 1.0\n")
        g = read_edge_list(path)
        assert g.m == 3
        assert g.weights[0, 1] == 2.5 and g.weights[2, 1] == 1.0

    def test_rejects_self_loop(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("1 1 1.0\n")
        with pytest.raises(ValueError, match="self-loop"):
            read_edge_list(path)

    def test_rejects_out_of_range(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("0 9 1.0\n")
        with pytest.raises(ValueError, match="out of range"):
            read_edge_list(path, m=4)

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("0 1\n")
        with pytest.raises(ValueError, match="malformed"):
            read_edge_list(path)


class TestArrays:
    def test_signals_round_trip(self, tmp_path, rng):
        X = rng.standard_normal((5, 9))
        path = tmp_path / "x.csv"
        write_signals_csv(path, X)
        assert np.array_equal(read_signals_csv(path), X)

    def test_matrix_round_trip(self, tmp_path, rng):
        M = rng.standard_normal((4, 4))
        path = tmp_path / "m.csv"
        write_matrix_csv(path, M)
        assert np.array_equal(read_matrix_csv(path), M)

    def test_single_row(self, tmp_path):
        path = tmp_path / "row.csv"
        write_signals_csv(path, np.array([1.0, 2.0, 3.0]))
        assert read_signals_csv(path).shape == (1, 3)


class TestMaskJson:
    def test_round_trip(self, tmp_path):
        mask = ObservationMask.from_hidden(7, [1, 4])
        path = tmp_path / "mask.json"
        write_mask_json(path, mask, seed=99)
        back = read_mask_json(path)
        assert np.array_equal(back.observed, mask.observed)
        assert np.array_equal(back.hidden, mask.hidden)
        assert read_json(path)["seed"] == 99


class TestHistoryCsv:
    def test_columns_and_determinism(self, tmp_path):
        _, _, _, X_obs, _ = make_instance(m=8, n=30, h=1, seed=5, edge_prob=0.5)
        pd = build_problem(X_obs)
        reg = RegParams(alpha=pd.z.mean() / 2, beta=pd.z.mean() / 2, gamma21=1.0)
        cfg = SolverConfig(reg=reg, rho=0.03, variant="glopss_cs", max_iter=40)

        def run(path):
            _, hist = solve(pd, cfg)
            write_history_csv(path, hist)
            return path.read_text()

        t1 = run(tmp_path / "h1.csv")
        t2 = run(tmp_path / "h2.csv")
        header = t1.splitlines()[0]
        assert header == ",".join(HISTORY_COLUMNS)
        # identical up to the timing column
        strip = lambda text: [",".join(line.split(",")[:-1]) for line in text.splitlines()]
        assert strip(t1) == strip(t2)
        assert len(t1.splitlines()) == 41


class TestTables:
    def test_table_csv(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table_csv(path, ("trial", "f"), [(0, 0.5), (1, 0.75)])
        lines = path.read_text().splitlines()
        assert lines[0] == "trial,f"
        assert lines[1].startswith("0,0.5")

    def test_json_round_trip(self, tmp_path):
        payload = {"b": [1, 2], "a": {"x": 1.5}}
        path = tmp_path / "p.json"
        write_json(path, payload)
        assert read_json(path) == payload


class TestConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("# experiment\nalpha = 0.5\nvariant = glopss_lr  # trailing\n\nseed=3\n")
        cfg = parse_config_file(path)
        assert cfg == {"alpha": "0.5", "variant": "glopss_lr", "seed": "3"}

    def test_rejects_bad_line(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("alpha 0.5\n")
        with pytest.raises(ValueError, match="key = value"):
            parse_config_file(path)
