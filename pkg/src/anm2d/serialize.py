"""Canonical, byte-reproducible serialization for results and benchmarks.

JSON: sorted keys, ASCII, floats at 17 significant digits (shortest exact
round trip), no timestamps. CSV: '#' metadata comment lines, a fixed header,
then rows. Identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float in canonical JSON: {x}")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _canon(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {type(key)}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _canon(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _canon(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonically serialize {type(obj)}")


def canonical_json(obj) -> str:
    out: list[str] = []
    _canon(obj, out)
    return "".join(out)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_json(obj))
        fh.write("\n")


def read_json(path):
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)


def complex_to_interleaved(arr) -> dict:
    """Complex array as {'shape': [...], 'data': [re0, im0, re1, im1, ...]}."""
    arr = np.asarray(arr, dtype=complex)
    flat = np.empty(2 * arr.size)
    flat[0::2] = arr.real.ravel()
    flat[1::2] = arr.imag.ravel()
    return {"shape": list(arr.shape), "data": flat.tolist()}


def interleaved_to_complex(d) -> np.ndarray:
    if not isinstance(d, dict) or "shape" not in d or "data" not in d:
        raise ValueError("expected a complex record with 'shape' and 'data'")
    data = np.asarray(d["data"], dtype=float)
    shape = tuple(int(s) for s in d["shape"])
    if data.ndim != 1 or data.size != 2 * int(np.prod(shape)):
        raise ValueError(f"interleaved data length {data.size} does not match "
                         f"shape {shape}")
    return (data[0::2] + 1j * data[1::2]).reshape(shape)


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "nan" if math.isnan(v) else _fmt_float(v)
    return str(v)


def write_csv(path, header: list[str], rows, meta: dict | None = None) -> None:
    lines = []
    for key in sorted(meta or {}):
        lines.append(f"# {key}={_fmt_cell(meta[key])}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_csv(path) -> tuple[list[str], list[list[str]], dict]:
    meta = {}
    header = None
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return header or [], rows, meta
