"""JSON encodings for matrices, channels, POVMs and strategies.

Matrix:   {"rows": 2, "cols": 2, "data": [[re, im], ...]}   (row-major)
Channel:  {"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}
POVM:     {"elements": [matrix, ...]}  or a bare list of matrices
Strategy: {"t": int, "dim": int, "pvms": [[matrix, ...], ...]}
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .directsum import Povm
from .errors import FormatError
from .zeroerr import PvmStrategy

SIG_DIGITS = 12


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError):
        raise FormatError("matrix needs integer 'rows', 'cols' and a 'data' list") from None
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise FormatError(f"matrix data has {len(data)} entries, expected {rows}x{cols}")
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in data])
    except (TypeError, ValueError):
        raise FormatError("matrix entries must be [re, im] pairs of numbers") from None
    if not np.all(np.isfinite(flat)):
        raise FormatError("matrix entries must be finite")
    return flat.reshape(rows, cols)


def channel_to_json(ch: KrausChannel) -> dict:
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "kraus": [matrix_to_json(k) for k in ch.kraus]}


def channel_from_json(obj, check: bool = True) -> KrausChannel:
    """Decode a channel. With ``check=False`` trace preservation is not enforced."""
    try:
        dim_in, dim_out, kraus = int(obj["dim_in"]), int(obj["dim_out"]), obj["kraus"]
    except (KeyError, TypeError, ValueError):
        raise FormatError("channel needs 'dim_in', 'dim_out' and a 'kraus' list") from None
    ops = [matrix_from_json(k) for k in kraus]
    if not ops:
        raise FormatError("channel has no Kraus operators")
    for k in ops:
        if k.shape != (dim_out, dim_in):
            raise FormatError(f"Kraus operator of shape {k.shape}, expected {(dim_out, dim_in)}")
    if check:
        return KrausChannel(dim_in, dim_out, tuple(ops))
    return KrausChannel.unchecked(dim_in, dim_out, ops)


def povm_to_json(povm: Povm) -> dict:
    return {"elements": [matrix_to_json(e) for e in povm.elements]}


def povm_from_json(obj) -> Povm:
    elements = obj.get("elements") if isinstance(obj, dict) else obj
    if not isinstance(elements, list):
        raise FormatError("POVM must be a list of matrices or {'elements': [...]}")
    return Povm(tuple(matrix_from_json(e) for e in elements))


def strategy_to_json(s: PvmStrategy) -> dict:
    return {"t": s.t, "dim": s.dim, "pvms": [[matrix_to_json(p) for p in fam] for fam in s.pvms]}


def strategy_from_json(obj) -> PvmStrategy:
    try:
        t, dim, pvms = int(obj["t"]), int(obj["dim"]), obj["pvms"]
    except (KeyError, TypeError, ValueError):
        raise FormatError("strategy needs 't', 'dim' and a 'pvms' list") from None
    return PvmStrategy(t, dim, tuple(tuple(matrix_from_json(p) for p in fam) for fam in pvms))


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def round_sig(obj, digits: int = SIG_DIGITS):
    """Recursively round floats to ``digits`` significant digits for stable output."""
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.{digits}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, np.ndarray):
        return round_sig(obj.tolist(), digits)
    return obj


def dumps(obj) -> str:
    return json.dumps(round_sig(obj), indent=2)
