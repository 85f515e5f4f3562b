"""File formats: headerless CSV matrices, JSON graphs and results."""
import json
from pathlib import Path

import numpy as np

from .synth import GroundTruthGraph


def format_matrix_csv(M) -> str:
    # repr gives the shortest string that round-trips a float64
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in M)


def write_matrix_csv(path, M):
    Path(path).write_text(format_matrix_csv(M))


def read_matrix_csv(path) -> np.ndarray:
    M = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    return M


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    Path(path).write_text(dump_json(obj))


def read_json(path):
    return json.loads(Path(path).read_text())


def write_graph(path, g: GroundTruthGraph):
    write_json(path, g.to_dict())


def read_graph(path) -> GroundTruthGraph:
    return GroundTruthGraph.from_dict(read_json(path))


def write_trace_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(repr(x) if isinstance(x, float) else str(x)
                       for x in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")
