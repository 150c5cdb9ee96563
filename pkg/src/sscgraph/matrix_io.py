"""On-disk formats: NPY/CSV activation matrices, label files, layer manifests.

Matrices are d-by-N with one column per sample.  NPY files must hold a 2-D
float32/float64 array; CSV files are headerless with d rows of N
comma-separated reals.  Labels are newline-delimited integers.  A manifest is
a JSON document listing (layer, epoch) -> matrix file records plus label and
optional prediction files; relative paths resolve against the manifest's
directory.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_SAMPLE_AXES = ("columns", "rows")


class MatrixFormatError(ValueError):
    """A matrix file exists but cannot be used."""


class ManifestError(ValueError):
    """A manifest document is malformed or references missing files."""


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def matrix_to_csv_text(matrix) -> str:
    """Comma-separated rows at full float64 round-trip precision."""
    buf = io.StringIO()
    np.savetxt(buf, np.atleast_2d(np.asarray(matrix, dtype=np.float64)), delimiter=",", fmt="%.17g")
    return buf.getvalue()


def load_matrix(path) -> np.ndarray:
    """Load a d-by-N activation matrix, format picked by file extension."""
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"matrix file does not exist: {path}")
    suffix = path.suffix.lower()
    if suffix == ".npy":
        arr = _load_npy(path)
    elif suffix == ".csv":
        arr = _load_csv(path)
    else:
        raise MatrixFormatError(
            f"unsupported matrix extension {suffix!r} for {path} (expected .npy or .csv)"
        )
    if arr.ndim != 2:
        raise MatrixFormatError(f"expected a 2-D matrix in {path}, got a {arr.ndim}-D array")
    if not np.all(np.isfinite(arr)):
        raise MatrixFormatError(f"matrix in {path} contains NaN or Inf entries")
    return np.ascontiguousarray(arr, dtype=np.float64)


def _load_npy(path: Path) -> np.ndarray:
    try:
        arr = np.load(path, allow_pickle=False)
    except ValueError as exc:
        raise MatrixFormatError(f"malformed NPY header in {path}: {exc}") from exc
    if arr.dtype not in (np.float32, np.float64):
        raise MatrixFormatError(
            f"unsupported element type {arr.dtype} in {path} (expected float32 or float64)"
        )
    return arr


def _load_csv(path: Path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise MatrixFormatError(f"malformed CSV in {path}: {exc}") from exc


def save_matrix(matrix, path) -> None:
    """Write a matrix as .npy (float64 binary) or .csv, chosen by extension."""
    path = Path(path)
    matrix = np.ascontiguousarray(np.asarray(matrix), dtype=np.float64)
    suffix = path.suffix.lower()
    if suffix == ".npy":
        buf = io.BytesIO()
        np.save(buf, matrix)
        atomic_write_bytes(path, buf.getvalue())
    elif suffix == ".csv":
        atomic_write_text(path, matrix_to_csv_text(matrix))
    else:
        raise MatrixFormatError(f"unsupported matrix extension {suffix!r} for {path}")


def load_labels(path) -> np.ndarray:
    """Read newline-delimited nonnegative integer class labels."""
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"labels file does not exist: {path}")
    values = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError as exc:
            raise MatrixFormatError(f"bad label on line {lineno} of {path}: {line!r}") from exc
    labels = np.asarray(values, dtype=np.int64)
    if labels.size == 0:
        raise MatrixFormatError(f"labels file {path} is empty")
    if labels.min() < 0:
        raise MatrixFormatError(f"labels file {path} contains negative class ids")
    return labels


def save_labels(labels, path) -> None:
    labels = np.asarray(labels, dtype=np.int64)
    atomic_write_text(path, "\n".join(str(int(v)) for v in labels) + "\n")


@dataclass(frozen=True)
class LayerRecord:
    layer_name: str
    matrix_path: Path
    epoch: int | None = None
    sample_axis: str = "columns"


@dataclass(frozen=True)
class LayerManifest:
    records: tuple[LayerRecord, ...]
    labels_path: Path
    predictions_path: Path | None = None


def load_manifest(path) -> LayerManifest:
    """Parse and validate a manifest JSON document."""
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest does not exist: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"manifest {path} must hold a JSON object")

    base = path.parent
    raw_records = doc.get("records")
    if not isinstance(raw_records, list) or not raw_records:
        raise ManifestError(f"manifest {path} needs a non-empty 'records' list")

    records = []
    seen: set[tuple[str, int | None]] = set()
    for pos, raw in enumerate(raw_records):
        if not isinstance(raw, dict):
            raise ManifestError(f"record {pos} in {path} must be an object")
        try:
            name = raw["layer_name"]
            matrix_path = raw["matrix_path"]
        except KeyError as exc:
            raise ManifestError(f"record {pos} in {path} is missing field {exc}") from exc
        if not isinstance(name, str) or not name:
            raise ManifestError(f"record {pos} in {path} has an invalid layer_name")
        epoch = raw.get("epoch")
        if epoch is not None and not isinstance(epoch, int):
            raise ManifestError(f"record {pos} in {path} has a non-integer epoch")
        axis = raw.get("sample_axis", "columns")
        if axis not in _SAMPLE_AXES:
            raise ManifestError(
                f"record {pos} in {path} has sample_axis {axis!r}, expected one of {_SAMPLE_AXES}"
            )
        key = (name, epoch)
        if key in seen:
            raise ManifestError(f"duplicate (layer_name, epoch) = {key} in {path}")
        seen.add(key)
        resolved = (base / matrix_path).resolve()
        if not resolved.exists():
            raise ManifestError(f"record {pos} in {path}: matrix file not found: {resolved}")
        records.append(
            LayerRecord(layer_name=name, matrix_path=resolved, epoch=epoch, sample_axis=axis)
        )

    labels_raw = doc.get("labels_path")
    if not isinstance(labels_raw, str) or not labels_raw:
        raise ManifestError(f"manifest {path} needs a 'labels_path'")
    labels_path = (base / labels_raw).resolve()
    if not labels_path.exists():
        raise ManifestError(f"labels file not found: {labels_path}")

    predictions_path = None
    predictions_raw = doc.get("predictions_path")
    if predictions_raw is not None:
        if not isinstance(predictions_raw, str):
            raise ManifestError(f"manifest {path} has an invalid 'predictions_path'")
        predictions_path = (base / predictions_raw).resolve()
        if not predictions_path.exists():
            raise ManifestError(f"predictions file not found: {predictions_path}")

    return LayerManifest(
        records=tuple(records), labels_path=labels_path, predictions_path=predictions_path
    )


def load_record_matrix(record: LayerRecord) -> np.ndarray:
    """Load a record's matrix, transposing when samples sit in rows."""
    matrix = load_matrix(record.matrix_path)
    if record.sample_axis == "rows":
        matrix = np.ascontiguousarray(matrix.T)
    return matrix
