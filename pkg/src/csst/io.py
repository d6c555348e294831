"""File formats for datasets, codebooks, region matrices and heatmaps.

Every writer goes through :func:`atomic_write`, which writes a temporary file
in the destination directory and renames it into place. Text is always UTF-8
with ``\\n`` line endings, so identical inputs give byte-identical files.
See ``README.md`` for the byte-level format reference.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .datagen import Dataset
from .errors import InvalidParameter, ParseError, RaggedRow, SchemaError
from .som import Codebook, GridTopology

CODEBOOK_FORMAT = "csst-codebook/1"
NA = "NA"


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt17(v: float) -> str:
    return f"{v:.17g}"


def _fmt9(v: float) -> str:
    return f"{v:.9g}"


# --- datasets ---------------------------------------------------------------

def write_dataset_csv(dataset: Dataset, path) -> None:
    lines = [",".join(dataset.column_names())]
    lines.extend(",".join(_fmt17(v) for v in row) for row in dataset.points)
    atomic_write(path, "\n".join(lines) + "\n")


def read_dataset_csv(path) -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise ParseError("empty file: missing header row", line=1)
    header = [h.strip() for h in rows[0]]
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise RaggedRow(f"expected {len(header)} fields, found {len(row)}", line=lineno)
        try:
            data.append([float(cell) for cell in row])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if not data:
        raise ParseError("no data rows after header", line=2)
    try:
        return Dataset(np.array(data), dim_names=tuple(header))
    except InvalidParameter as exc:
        raise ParseError(str(exc)) from None


# --- codebooks --------------------------------------------------------------

def write_codebook_json(codebook: Codebook, path) -> None:
    doc = {
        "format": CODEBOOK_FORMAT,
        "rows": codebook.topology.rows,
        "cols": codebook.topology.cols,
        "dim": codebook.dim,
        "prototypes": codebook.prototypes.tolist(),
    }
    atomic_write(path, json.dumps(doc, indent=1) + "\n")


def read_codebook_json(path) -> Codebook:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("codebook document must be a JSON object")
    for key in ("rows", "cols", "dim", "prototypes"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    rows, cols, dim = doc["rows"], doc["cols"], doc["dim"]
    if not all(isinstance(v, int) and v >= 1 for v in (rows, cols, dim)):
        raise SchemaError("rows, cols and dim must be positive integers")
    try:
        protos = np.array(doc["prototypes"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"prototypes are not a numeric matrix: {exc}") from None
    if protos.ndim != 2 or protos.shape[0] != rows * cols:
        raise SchemaError(f"expected {rows * cols} prototypes, found shape {protos.shape}")
    if protos.shape[1] != dim:
        raise SchemaError(f"prototype dimension {protos.shape[1]} != dim {dim}")
    try:
        return Codebook(GridTopology(rows, cols), protos)
    except InvalidParameter as exc:
        raise SchemaError(str(exc)) from None


# --- matrices ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MatrixFile:
    """Labelled square matrix; NaN entries are absent and serialize as ``NA``."""

    labels: Sequence[int]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] != len(self.labels):
            raise InvalidParameter(f"{len(self.labels)} labels for a matrix of shape {vals.shape}")
        object.__setattr__(self, "values", vals)


def write_matrix_csv(matrix: MatrixFile, path) -> None:
    labels = [str(lab) for lab in matrix.labels]
    lines = [",".join(["region"] + labels)]
    for i, lab in enumerate(labels):
        cells = []
        for j in range(len(labels)):
            v = matrix.values[i, j]
            if i == j:
                cells.append("0")
            elif math.isnan(v):
                cells.append(NA)
            else:
                cells.append(_fmt9(v))
        lines.append(",".join([lab] + cells))
    atomic_write(path, "\n".join(lines) + "\n")


def read_matrix_csv(path) -> MatrixFile:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", line=1)
    labels = rows[0][1:]
    body = rows[1:]
    if len(body) != len(labels):
        raise ParseError(f"{len(labels)} labels but {len(body)} rows")
    values = np.empty((len(labels), len(labels)))
    for i, row in enumerate(body):
        if len(row) != len(labels) + 1:
            raise RaggedRow(f"expected {len(labels) + 1} fields, found {len(row)}", line=i + 2)
        for j, cell in enumerate(row[1:]):
            values[i, j] = np.nan if cell == NA else float(cell)
    return MatrixFile(labels=[int(lab) for lab in labels], values=values)


def write_grid_csv(values: np.ndarray, path) -> None:
    """Headerless CSV of a real matrix at 17 significant digits (used for U-matrices)."""
    values = np.asarray(values, dtype=np.float64)
    lines = [",".join(_fmt17(v) for v in row) for row in values]
    atomic_write(path, "\n".join(lines) + "\n")


# --- heatmaps ---------------------------------------------------------------

def heatmap_pixels(values, invert: bool = False) -> np.ndarray:
    """Map ``[min, max]`` linearly onto 0..255 (rounded half up); a constant input maps to 0."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 2 or v.size == 0:
        raise InvalidParameter(f"heatmap needs a non-empty 2D matrix, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidParameter("heatmap values must be finite")
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros(v.shape, dtype=np.int64)
    pix = np.floor((v - lo) / (hi - lo) * 255.0 + 0.5).astype(np.int64)
    pix = np.clip(pix, 0, 255)
    return 255 - pix if invert else pix


def write_pgm_heatmap(values, path, invert: bool = False) -> None:
    pix = heatmap_pixels(values, invert)
    height, width = pix.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines.extend(" ".join(str(p) for p in row) for row in pix)
    atomic_write(path, "\n".join(lines) + "\n")


def read_pgm(path) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens or tokens[0] != "P2":
        raise ParseError("not a plain PGM (P2) file", line=1)
    width, height, _maxval = (int(t) for t in tokens[1:4])
    pix = np.array([int(t) for t in tokens[4:]], dtype=np.int64)
    if pix.size != width * height:
        raise ParseError(f"expected {width * height} pixels, found {pix.size}")
    return pix.reshape(height, width)
