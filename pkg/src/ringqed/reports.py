"""Output writers: CSV tables, JSON provenance sidecars, gnuplot scripts.

Every table written by the drivers is a plain CSV with a header row and
full-precision floats, paired with a JSON sidecar that records the fully
resolved run configuration, the master seed, exclusion counts, and a
SHA-256 hash of each data file so results stay attributable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return format(complex(value).real, ".17g") + (
            format(complex(value).imag, "+.17g") + "j"
        )
    return str(value)


def write_csv(path, header: Sequence[str], columns: Sequence) -> Path:
    """Write equal-length columns under a header row."""
    path = Path(path)
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(header):
        raise ValueError("header and columns length mismatch")
    n = cols[0].shape[0] if cols else 0
    for c in cols:
        if c.shape[0] != n:
            raise ValueError("columns must share a length")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(_fmt(c[i]) for c in cols) + "\n")
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):  # bool subclasses int; check first
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(np.real(obj)), "im": float(np.imag(obj))}
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_sidecar(path, *, config: Mapping, seed, data_files: Iterable = (),
                  **extra) -> Path:
    """JSON provenance sidecar next to the data files it describes."""
    from . import __version__

    path = Path(path)
    payload = {
        "generator": f"ringqed {__version__}",
        "config": _jsonable(dict(config)),
        "seed": _jsonable(seed),
        "data_files": {Path(f).name: sha256_file(f) for f in data_files},
    }
    payload.update({k: _jsonable(v) for k, v in extra.items()})
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_gnuplot(path, csv_name: str, title: str, xlabel: str, ylabel: str,
                  series: Sequence[tuple[int, int, str]],
                  logx: bool = False, logy: bool = False) -> Path:
    """Small gnuplot driver for a CSV written by write_csv.

    series entries are (x_column, y_column, label) with 1-based columns.
    """
    path = Path(path)
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set key outside",
    ]
    if logx:
        lines.append("set logscale x")
    if logy:
        lines.append("set logscale y")
    plots = ", ".join(
        f"'{csv_name}' using {x}:{y} skip 1 with linespoints title '{label}'"
        for x, y, label in series
    )
    lines.append("plot " + plots)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
