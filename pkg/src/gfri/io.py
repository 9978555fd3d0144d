"""File formats: graph JSON, signal/sample/support CSV, filterbank JSON.

Numbers are written with 17 significant digits so that reruns are byte-identical
and values round-trip exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .circulant import CirculantGraph, PathGraph
from .errors import InvalidGraphError
from .filterbanks import FilterBank
from .multires import WaveletCoefficients
from .sampling import SparseSignal, SpectralSamples

__all__ = [
    "FLOAT_FMT",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph",
    "save_graph",
    "read_signal_csv",
    "write_signal_csv",
    "read_samples_csv",
    "write_samples_csv",
    "read_sparse_csv",
    "write_sparse_csv",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_coefficients_csv",
    "filterbank_to_dict",
    "dump_json",
]

FLOAT_FMT = "%.16e"


def _fmt(v: float) -> str:
    return FLOAT_FMT % float(v)


def graph_from_dict(d: dict):
    if not isinstance(d, dict):
        raise InvalidGraphError("graph description must be a JSON object")
    try:
        if d.get("type") == "path":
            return PathGraph(int(d["n"]))
        if "type" in d and d["type"] != "circulant":
            raise InvalidGraphError(f"unknown graph type {d['type']!r}")
        gens = d["generators"]
        if not isinstance(gens, list):
            raise InvalidGraphError("generators must be a list")
        return CirculantGraph(int(d["n"]), [tuple(g) if isinstance(g, list) else g for g in gens])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidGraphError):
            raise
        raise InvalidGraphError(f"malformed graph description: {exc}") from None


def graph_to_dict(g) -> dict:
    return g.to_dict()


def load_graph(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidGraphError(f"{path}: invalid JSON ({exc})") from None
    return graph_from_dict(data)


def save_graph(g, path):
    dump_json(graph_to_dict(g), path)


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _rows(path, header):
    text = Path(path).read_text()
    reader = csv.reader(_io.StringIO(text))
    out = []
    for i, row in enumerate(reader):
        if not row or not "".join(row).strip():
            continue
        if i == 0 and [c.strip() for c in row] == header:
            continue
        if len(row) != len(header):
            raise InvalidGraphError(f"{path}: row {i + 1} has {len(row)} fields, expected {len(header)}")
        try:
            out.append([float(c) for c in row])
        except ValueError:
            raise InvalidGraphError(f"{path}: non-numeric value in row {i + 1}") from None
    return np.array(out, dtype=float).reshape(-1, len(header))


def _write(path, header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_signal_csv(path) -> np.ndarray:
    data = _rows(path, ["re", "im"])
    x = data[:, 0] + 1j * data[:, 1]
    return x


def write_signal_csv(x, path=None) -> str:
    x = np.asarray(x, dtype=complex)
    return _write(path, ["re", "im"], ([_fmt(v.real), _fmt(v.imag)] for v in x))


def read_samples_csv(path, n: int, basis: str = "DFT") -> SpectralSamples:
    data = _rows(path, ["m", "re", "im"])
    order = np.argsort(data[:, 0])
    m = data[order, 0].astype(int)
    if not np.array_equal(m, np.arange(m.size)):
        raise InvalidGraphError(f"{path}: sample indices must be 0..M-1")
    return SpectralSamples(data[order, 1] + 1j * data[order, 2], n, basis)


def write_samples_csv(samples: SpectralSamples, path=None) -> str:
    y = np.asarray(samples.y, dtype=complex)
    return _write(path, ["m", "re", "im"], ([str(m), _fmt(v.real), _fmt(v.imag)] for m, v in enumerate(y)))


def read_sparse_csv(path, n: int) -> SparseSignal:
    data = _rows(path, ["c", "re", "im"])
    return SparseSignal(n, data[:, 0].astype(int), data[:, 1] + 1j * data[:, 2])


def write_sparse_csv(x: SparseSignal, path=None) -> str:
    return _write(path, ["c", "re", "im"],
                  ([str(c), _fmt(a.real), _fmt(a.imag)] for c, a in zip(x.support, x.amplitudes)))


def write_matrix_csv(m, path=None) -> str:
    m = np.atleast_2d(np.asarray(m))
    if np.iscomplexobj(m):
        raise ValueError("matrix CSV holds real matrices only")
    text = "\n".join(",".join(_fmt(v) for v in row) for row in m) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_matrix_csv(path) -> np.ndarray:
    try:
        rows = [[float(c) for c in r] for r in csv.reader(Path(path).read_text().splitlines()) if r]
        m = np.array(rows, dtype=float)
    except ValueError as exc:
        raise InvalidGraphError(f"{path}: malformed matrix ({exc})") from None
    if m.ndim != 2:
        raise InvalidGraphError(f"{path}: rows have unequal lengths")
    return m


def write_coefficients_csv(coeffs: WaveletCoefficients, path=None) -> str:
    """Rows ``band,index,re,im``; bands ``lp`` and ``hp<j>`` in classic order."""
    rows = []
    bands = [("lp", coeffs.lowpass)] + [(f"hp{j}", coeffs.highpass[j]) for j in reversed(range(len(coeffs.highpass)))]
    for name, values in bands:
        for i, v in enumerate(np.asarray(values, dtype=complex)):
            rows.append([name, str(i), _fmt(v.real), _fmt(v.imag)])
    return _write(path, ["band", "index", "re", "im"], rows)


def filterbank_to_dict(fb: FilterBank) -> dict:
    spec = fb.spec
    out = {
        "kind": spec.kind,
        "k": spec.k,
        "alphas": [float(a) for a in spec.alphas],
        "betas": [float(b) for b in spec.betas],
        "graph": fb.graph.to_dict(),
        "keep_lowpass": list(fb.sampling.keep_lowpass),
        "first_rows": {name: [float(v) for v in row] for name, row in fb.first_rows().items()},
    }
    if fb.normalization is not None:
        out["normalization"] = [float(c) for c in fb.normalization]
    return out
