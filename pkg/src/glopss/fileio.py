"""On-disk formats: edge lists, signal CSVs, mask JSON, histories, manifests.

All writers are deterministic: fixed float formatting, fixed orderings,
sorted JSON keys.  Timing columns are the one exception (documented on
the history writer).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .graphs import Graph, ObservationMask
from .solver import ConvergenceHistory

__all__ = [
    "write_edge_list",
    "read_edge_list",
    "write_signals_csv",
    "read_signals_csv",
    "write_mask_json",
    "read_mask_json",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_history_csv",
    "write_json",
    "read_json",
    "write_table_csv",
    "parse_config_file",
]

_FLOAT = "%.17g"  # round-trips float64 exactly


def write_edge_list(path, W: np.ndarray, comment: str | None = None):
    """One line per strictly positive upper-triangular entry: "i j weight"."""
    W = np.asarray(W, dtype=float)
    lines = []
    if comment:
        lines.append(f"# {comment}")
    iu, ju = np.triu_indices(W.shape[0], k=1)
    for i, j in zip(iu, ju):
        if W[i, j] > 0:
            lines.append(f"{i} {j} {_FLOAT % W[i, j]}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path, m: int | None = None) -> Graph:
    """Parse "i j weight" lines (0-based, '#' comments) into a graph.

    Node count defaults to the largest index seen plus one; pass ``m``
    to include trailing isolated nodes.
    """
    entries = []
    max_idx = -1
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"malformed edge line: {raw!r}")
        i, j, wt = int(parts[0]), int(parts[1]), float(parts[2])
        if i == j:
            raise ValueError(f"self-loop on node {i}")
        if i < 0 or j < 0 or wt < 0:
            raise ValueError(f"negative index or weight in line: {raw!r}")
        entries.append((i, j, wt))
        max_idx = max(max_idx, i, j)
    size = max_idx + 1 if m is None else m
    if m is not None and max_idx >= m:
        raise ValueError(f"edge index {max_idx} out of range for m={m}")
    W = np.zeros((size, size))
    for i, j, wt in entries:
        W[i, j] = wt
        W[j, i] = wt
    return Graph(W)


def write_signals_csv(path, X: np.ndarray):
    """One row per node, one column per sample."""
    np.savetxt(path, np.atleast_2d(X), delimiter=",", fmt=_FLOAT)


def read_signals_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))


def write_mask_json(path, mask: ObservationMask, seed: int | None = None):
    payload = {
        "observed": mask.observed.tolist(),
        "hidden": mask.hidden.tolist(),
    }
    if seed is not None:
        payload["seed"] = seed
    write_json(path, payload)


def read_mask_json(path) -> ObservationMask:
    payload = read_json(path)
    return ObservationMask(
        observed=np.asarray(payload["observed"], dtype=int),
        hidden=np.asarray(payload["hidden"], dtype=int),
    )


def write_matrix_csv(path, M: np.ndarray):
    np.savetxt(path, np.atleast_2d(M), delimiter=",", fmt=_FLOAT)


def read_matrix_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))


HISTORY_COLUMNS = ("iter", "r_p", "r_d", "r_scalar", "objective", "kkt", "m_step", "rho", "time_ms")


def write_history_csv(path, history: ConvergenceHistory):
    """Per-iteration diagnostics.

    Every column except ``time_ms`` is deterministic under a fixed seed;
    comparisons for reproducibility should drop that column.
    """
    rows = [",".join(HISTORY_COLUMNS)]
    for i in range(len(history)):
        rows.append(
            ",".join(
                [str(i)]
                + [
                    _FLOAT % x
                    for x in (
                        history.r_p[i],
                        history.r_d[i],
                        history.r_scalar[i],
                        history.objective[i],
                        history.kkt[i],
                        history.m_step[i],
                        history.rho[i],
                        history.time_ms[i],
                    )
                ]
            )
        )
    Path(path).write_text("\n".join(rows) + "\n")


def _jsonable(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_json(path, payload):
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def write_table_csv(path, header, rows):
    """Plot-ready CSV: header tuple plus an iterable of row tuples."""
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(_FLOAT % x if isinstance(x, float) else str(x) for x in row))
    Path(path).write_text("\n".join(out) + "\n")


def parse_config_file(path) -> dict:
    """Flat "key = value" document; '#' starts a comment."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg
