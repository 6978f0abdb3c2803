"""Reading distributions and joint tables from JSON or CSV files."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .errors import MalformedFile
from .prob import JointTable, ProbVector, normalize_table, normalize_validate


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedFile(f"{path}: cannot read ({exc.strerror})") from None


def _parse_json(path, text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno} (offset {exc.pos}): {exc.msg}") from None
    try:
        return np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise MalformedFile(f"{path}: expected a (nested) array of numbers with equal-length rows") from None


def _parse_csv(path, text: str) -> np.ndarray:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            col = next(i for i, c in enumerate(cells, start=1) if not _is_float(c))
            raise MalformedFile(f"{path}: line {lineno}, column {col}: not a number: {cells[col - 1]!r}") from None
    if not rows:
        raise MalformedFile(f"{path}: no data rows")
    if len({len(r) for r in rows}) != 1:
        raise MalformedFile(f"{path}: rows have different lengths")
    return np.array(rows, dtype=np.float64)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_array(path) -> np.ndarray:
    text = _read_text(path)
    if str(path).lower().endswith(".csv"):
        return _parse_csv(path, text)
    return _parse_json(path, text)


def load_vector(path) -> ProbVector:
    """Flat array (JSON) or a single CSV row/column, normalized once."""
    a = read_array(path)
    if a.ndim == 2 and 1 in a.shape:
        a = a.ravel()
    if a.ndim != 1:
        raise MalformedFile(f"{path}: expected a flat array, got shape {a.shape}")
    return normalize_validate(a)


def load_table(path) -> JointTable:
    """Row-major nested arrays (JSON, any rank >= 2) or CSV rows, normalized once."""
    a = read_array(path)
    if a.ndim < 2:
        raise MalformedFile(f"{path}: expected nested arrays (rows), got shape {a.shape}")
    return normalize_table(a)
