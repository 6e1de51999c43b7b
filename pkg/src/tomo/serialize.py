"""Dataset writers and readers for the CLI.

All writes are atomic (temp file + rename in the target directory) and
deterministic: CSV numbers use 17 significant digits, which round-trips
IEEE doubles exactly, and JSON documents keep a fixed key order.
Complex numbers are encoded as [re, im] pairs.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .angular import projections
from .errors import ValidationError
from .spin_tomography import SpinTomogram

__all__ = [
    "fmt",
    "atomic_write_text",
    "write_csv",
    "write_json",
    "complex_to_pair",
    "pair_to_complex",
    "matrix_to_json",
    "json_to_matrix",
    "tomogram_to_json",
    "tomogram_from_json",
    "tomogram_rows",
]


def fmt(x: float) -> str:
    """17-significant-digit decimal form of a float."""
    return format(float(x), ".17g")


def atomic_write_text(path: str, text: str) -> None:
    """Write text so that an interrupted run leaves no partial file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tomo-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, document) -> None:
    atomic_write_text(path, json.dumps(document, indent=2) + "\n")


def complex_to_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def pair_to_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValidationError(f"cannot parse {value!r} as a complex number ([re, im])")


def matrix_to_json(matrix: np.ndarray) -> list:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(matrix, dtype=complex)]


def json_to_matrix(data) -> np.ndarray:
    return np.array([[pair_to_complex(z) for z in row] for row in data], dtype=complex)


def tomogram_to_json(tom: SpinTomogram) -> dict:
    """JSON document carrying the full tomogram with grid metadata.

    The m axis is listed ascending (-j .. +j); the in-memory layout is
    basis order (+j .. -j) and gets flipped on both conversions.
    """
    ms = projections(tom.spin)[::-1]
    doc = {
        "schema": "tomo.spin_tomogram/1",
        "j": tom.spin,
        "band_limit": tom.band_limit,
        "normalized": tom.normalized,
        "m": [float(m) for m in ms],
        "directions": [[float(p), float(t)] for p, t in tom.directions],
        "weights": None if tom.weights is None else [float(w) for w in tom.weights],
        "values": [[float(v) for v in row[::-1]] for row in tom.values],
    }
    return doc


def tomogram_from_json(doc: dict) -> SpinTomogram:
    if doc.get("schema") != "tomo.spin_tomogram/1":
        raise ValidationError(f"unsupported tomogram schema {doc.get('schema')!r}")
    weights = doc.get("weights")
    return SpinTomogram(
        spin=float(doc["j"]),
        directions=np.asarray(doc["directions"], dtype=float),
        values=np.asarray(doc["values"], dtype=float)[:, ::-1],
        weights=None if weights is None else np.asarray(weights, dtype=float),
        band_limit=doc.get("band_limit"),
        normalized=bool(doc.get("normalized", True)),
    )


def tomogram_rows(tom: SpinTomogram):
    """CSV rows (phi, theta, m, w), m ascending within each direction."""
    ms = projections(tom.spin)[::-1]
    for (phi, theta), row in zip(tom.directions, tom.values):
        for m, w in zip(ms, row[::-1]):
            yield (phi, theta, m, w)
