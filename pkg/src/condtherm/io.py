"""JSON model/process files and lossless CSV emission.

Complex matrices are nested lists of ``[re, im]`` pairs. Hamiltonians and
process operators are row-major (``m[i][j]`` is row ``i``); ``pointer_basis``
is column-major (``basis[k]`` is the vector ``|psi_k>``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CondThermError, PreconditionError
from .linalg import check_hermitian, check_unitary
from .process import ProcessSpec


class ModelFormatError(CondThermError, ValueError):
    """A model or process file does not match its schema."""


def encode_matrix(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, dim: int, name: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"{name}: entries must be [re, im] number pairs") from exc
    if arr.shape != (dim, dim, 2):
        raise ModelFormatError(f"{name}: expected shape ({dim}, {dim}, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelFormatError(f"{name}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ModelFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ModelFormatError(f"{path}: top level must be an object")
    return data


def _dim(data: dict) -> int:
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ModelFormatError("'dim' must be a positive integer")
    return dim


def _beta(data: dict, required: bool, positive: bool = False):
    if "beta" not in data:
        if required:
            raise ModelFormatError("'beta' is required")
        return None
    beta = data["beta"]
    if not isinstance(beta, (int, float)) or isinstance(beta, bool) or not math.isfinite(beta):
        raise ModelFormatError("'beta' must be a finite number")
    if positive and beta <= 0:
        raise ModelFormatError("'beta' must be positive")
    return float(beta)


@dataclass(frozen=True)
class Model:
    hamiltonian: np.ndarray
    pointer_basis: np.ndarray
    beta: float | None = None

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def _validated(check, *args):
    try:
        return check(*args)
    except PreconditionError as exc:
        raise ModelFormatError(str(exc)) from exc


def load_model(path) -> Model:
    data = _read_json(path)
    dim = _dim(data)
    for key in ("hamiltonian", "pointer_basis"):
        if key not in data:
            raise ModelFormatError(f"missing '{key}'")
    h = _validated(check_hermitian, decode_matrix(data["hamiltonian"], dim, "hamiltonian"), "hamiltonian")
    basis = decode_matrix(data["pointer_basis"], dim, "pointer_basis").T
    basis = _validated(check_unitary, basis, "pointer_basis")
    return Model(h, basis, _beta(data, required=False))


def model_to_json(h, basis, beta: float | None = None) -> dict:
    out = {"dim": int(np.shape(h)[0]), "hamiltonian": encode_matrix(h),
           "pointer_basis": encode_matrix(np.asarray(basis).T)}
    if beta is not None:
        out["beta"] = float(beta)
    return out


def load_process(path) -> ProcessSpec:
    data = _read_json(path)
    dim = _dim(data)
    beta = _beta(data, required=True, positive=True)
    mats = {}
    for key in ("h0", "htau", "utau"):
        if key not in data:
            raise ModelFormatError(f"missing '{key}'")
        mats[key] = decode_matrix(data[key], dim, key)
    return _validated(ProcessSpec, mats["h0"], mats["htau"], mats["utau"], beta)


def process_to_json(spec: ProcessSpec) -> dict:
    return {"dim": spec.dim, "beta": spec.beta, "h0": encode_matrix(spec.h0),
            "htau": encode_matrix(spec.htau), "utau": encode_matrix(spec.utau)}


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def fmt(value) -> str:
    """17 significant digits for floats; integers and flags verbatim."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.16e}"


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def json_text(rows) -> str:
    def plain(v):
        if isinstance(v, (bool, np.bool_)):
            return bool(v)
        if isinstance(v, (int, np.integer)):
            return int(v)
        return float(v)
    return json.dumps([{k: plain(v) for k, v in row.items()} for row in rows], indent=1) + "\n"


def render(columns, rows, fmt_tag: str) -> str:
    if fmt_tag == "csv":
        return csv_text(columns, rows)
    if fmt_tag == "json":
        return json_text([{c: row[c] for c in columns} for row in rows])
    raise ValueError(f"unknown format {fmt_tag!r}")
