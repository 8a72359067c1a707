"""Matrix files and sweep CSV.

Matrix files are JSON documents::

    {"kind": "density", "dim": 2, "matrix": [[[re, im], ...], ...]}

``kind`` is one of ``density``, ``observable`` or ``state_vector``; a state
vector carries ``"vector": [[re, im], ...]`` instead of ``matrix``. Files are
written in one canonical layout with every float at 17 significant digits, so
write -> read -> write reproduces the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .operators import CoherBoundError, DensityMatrix, HermitianOperator, PureState

KINDS = ("density", "observable", "state_vector")


class ParseError(CoherBoundError, ValueError):
    pass


def fmt_float(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def _pair(z: complex) -> str:
    return f"[{fmt_float(z.real)}, {fmt_float(z.imag)}]"


def dumps_matrix(obj, kind: str | None = None) -> str:
    if isinstance(obj, PureState):
        kind = kind or "state_vector"
        data = obj.amplitudes
    elif isinstance(obj, HermitianOperator):
        kind = kind or ("density" if isinstance(obj, DensityMatrix) else "observable")
        data = obj.m
    else:
        data = np.asarray(obj, dtype=np.complex128)
        if kind is None:
            raise ValueError("kind is required for raw arrays")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    dim = data.shape[0]
    lines = ["{", f'  "kind": "{kind}",', f'  "dim": {dim},']
    if kind == "state_vector":
        if data.ndim != 1:
            raise ValueError("state_vector needs a 1-d array")
        body = ",\n".join(f"    {_pair(z)}" for z in data)
        lines.append(f'  "vector": [\n{body}\n  ]')
    else:
        rows = ",\n".join("    [" + ", ".join(_pair(z) for z in row) + "]" for row in data)
        lines.append(f'  "matrix": [\n{rows}\n  ]')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_matrix_file(path, obj, kind: str | None = None) -> None:
    Path(path).write_text(dumps_matrix(obj, kind), encoding="utf-8")


def _complex_array(raw, shape, what):
    try:
        a = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: entries must be [re, im] number pairs") from exc
    if a.shape != (*shape, 2):
        raise ParseError(f"{what}: expected shape {shape} of [re, im] pairs, got {a.shape[:-1] if a.ndim else a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def loads_matrix(text: str):
    """Parse a matrix document into a DensityMatrix, HermitianOperator or
    PureState, validating the matching invariants."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("matrix file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"'kind' must be one of {KINDS}, got {kind!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"'dim' must be a positive integer, got {dim!r}")
    if kind == "state_vector":
        if "vector" not in doc:
            raise ParseError("state_vector file needs a 'vector' field")
        return PureState(_complex_array(doc["vector"], (dim,), "vector"))
    if "matrix" not in doc:
        raise ParseError(f"{kind} file needs a 'matrix' field")
    m = _complex_array(doc["matrix"], (dim, dim), "matrix")
    return DensityMatrix(m) if kind == "density" else HermitianOperator(m)


def read_matrix_file(path):
    return loads_matrix(Path(path).read_text(encoding="utf-8"))


# -- sweep CSV ---------------------------------------------------------------

@dataclass
class SweepRow:
    dim: int
    trial: int
    seed: int
    lhs: float
    c_l1: float
    roof_upper: float | None
    margin: float
    optimal_lhs: float
    runtime_ms: float | None


SWEEP_FIELDS = tuple(f.name for f in fields(SweepRow))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return fmt_float(v)


def write_sweep_csv(rows, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for row in rows:
        w.writerow([_cell(getattr(row, name)) for name in SWEEP_FIELDS])


def sweep_csv_text(rows) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def read_sweep_csv(stream) -> list[dict]:
    out = []
    for rec in csv.DictReader(stream):
        out.append({k: (None if v == "" else (int(v) if k in ("dim", "trial", "seed") else float(v)))
                    for k, v in rec.items()})
    return out
