"""Manifest-driven analysis suites and result emission.

Three suites mirror the analyses the toolkit exists for: per-layer training
dynamics (modularity and CKA-to-final curves over epochs), pairwise
architecture comparison (all-layer CKA heatmaps at one epoch), and
per-instance neighborhood analysis with affinity-based label assignment.
The suites only compose solver, similarity and graph-metric operations; no
analysis math lives here.

All emitted artifacts are deterministic: JSON with sorted keys, CSV at full
float precision, hand-rolled SVG heatmaps, every file written atomically.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .graph_metrics import (
    class_affinity_profile,
    agreement,
    isolated_nodes,
    modularity,
    ssc_labels,
    top_neighbors,
)
from .matrix_io import (
    LayerManifest,
    LayerRecord,
    atomic_write_text,
    load_labels,
    load_record_matrix,
    matrix_to_csv_text,
)
from .similarity import DegenerateKernelError, cka, linear_gram, pairwise_cka
from .solver import SscConfig, build_affinity, solve_ssc


def run_training_dynamics(
    manifest: LayerManifest, cfg: SscConfig = SscConfig(), num_classes: int | None = None
) -> dict:
    """Per-layer modularity and CKA-to-final-epoch curves.

    Every record needs an epoch tag, every layer needs at least two epochs
    including the manifest-wide final (maximum) epoch.
    """
    labels = load_labels(manifest.labels_path)
    by_layer = _group_by_layer(manifest.records)
    for name, records in by_layer.items():
        if any(rec.epoch is None for rec in records):
            raise ValueError(f"training dynamics needs epoch tags; layer {name!r} has records without one")
        if len(records) < 2:
            raise ValueError(f"layer {name!r} has {len(records)} epoch(s), need at least 2")
    final_epoch = max(rec.epoch for records in by_layer.values() for rec in records)

    per_layer = {}
    num_samples = labels.shape[0]
    for name, records in by_layer.items():
        epochs = sorted(rec.epoch for rec in records)
        if epochs[-1] != final_epoch:
            raise ValueError(f"layer {name!r} is missing the final epoch {final_epoch}")
        by_epoch = {rec.epoch: rec for rec in records}

        affinities = {}
        grams = {}
        for epoch in epochs:
            x = _load_checked(by_epoch[epoch], num_samples)
            coeffs, _ = solve_ssc(x, cfg)
            affinities[epoch] = build_affinity(coeffs)
            grams[epoch] = linear_gram(x)

        final_affinity = affinities[final_epoch]
        final_gram = grams[final_epoch]
        layer_curve = {
            "epochs": epochs,
            "modularity": [],
            "ssc_cka_to_final": [],
            "linear_cka_to_final": [],
        }
        for epoch in epochs:
            layer_curve["modularity"].append(modularity(affinities[epoch], labels))
            try:
                layer_curve["ssc_cka_to_final"].append(cka(affinities[epoch], final_affinity))
                layer_curve["linear_cka_to_final"].append(cka(grams[epoch], final_gram))
            except DegenerateKernelError as exc:
                raise DegenerateKernelError(
                    f"layer {name!r} at epoch {epoch} is degenerate: {exc}"
                ) from exc
        per_layer[name] = layer_curve

    return {
        "suite": "training_dynamics",
        "final_epoch": final_epoch,
        "layers": list(by_layer),
        "num_samples": num_samples,
        "per_layer": per_layer,
        "solver": asdict(cfg),
    }


def run_pairwise_architecture(
    manifest: LayerManifest,
    cfg: SscConfig = SscConfig(),
    epoch: int | None = None,
    include_linear: bool = True,
) -> dict:
    """All-pairs CKA between the layers of a single-epoch manifest."""
    records = list(manifest.records)
    if epoch is not None:
        records = [rec for rec in records if rec.epoch == epoch]
        if not records:
            raise ValueError(f"no manifest records at epoch {epoch}")
    epochs = {rec.epoch for rec in records}
    if len(epochs) > 1:
        raise ValueError(
            f"pairwise comparison needs a single epoch, manifest has {sorted(map(str, epochs))}; "
            "pass an epoch selector"
        )
    if len(records) < 2:
        raise ValueError(f"pairwise comparison needs at least 2 layers, got {len(records)}")

    labels = load_labels(manifest.labels_path)
    num_samples = labels.shape[0]
    names = [rec.layer_name for rec in records]
    affinities = []
    grams = []
    for rec in records:
        x = _load_checked(rec, num_samples)
        coeffs, _ = solve_ssc(x, cfg)
        affinities.append(build_affinity(coeffs))
        grams.append(linear_gram(x))

    report = {
        "suite": "pairwise_architecture",
        "epoch": next(iter(epochs)),
        "layers": names,
        "num_samples": num_samples,
        "ssc_cka": _named_pairwise(affinities, names, "affinity"),
        "solver": asdict(cfg),
    }
    if include_linear:
        report["linear_cka"] = _named_pairwise(grams, names, "linear Gram")
    return report


def run_instance_analysis(
    manifest: LayerManifest,
    cfg: SscConfig = SscConfig(),
    queries=(),
    k: int = 8,
    layer: str | None = None,
    epoch: int | None = None,
    num_classes: int | None = None,
) -> dict:
    """Label assignment summary plus per-query profiles and neighbor lists."""
    record = _select_record(manifest, layer, epoch)
    labels = load_labels(manifest.labels_path)
    predictions = None
    if manifest.predictions_path is not None:
        predictions = load_labels(manifest.predictions_path)
        if predictions.shape[0] != labels.shape[0]:
            raise ValueError(
                f"predictions length {predictions.shape[0]} does not match labels {labels.shape[0]}"
            )
    x = _load_checked(record, labels.shape[0])
    coeffs, _ = solve_ssc(x, cfg)
    affinity = build_affinity(coeffs)

    if num_classes is None:
        num_classes = int(labels.max()) + 1
        if predictions is not None:
            num_classes = max(num_classes, int(predictions.max()) + 1)
    assigned = ssc_labels(affinity, labels, num_classes)

    summary = {
        "ssc_label_accuracy": agreement(assigned, labels),
        "isolated_nodes": int(isolated_nodes(affinity).shape[0]),
    }
    if predictions is not None:
        summary["network_accuracy"] = agreement(predictions, labels)
        summary["ssc_network_agreement"] = agreement(assigned, predictions)

    query_rows = []
    for raw in queries:
        i = int(raw)
        if not 0 <= i < labels.shape[0]:
            raise IndexError(f"query index {i} out of range for {labels.shape[0]} samples")
        profile = class_affinity_profile(affinity, labels, i, num_classes)
        neighbors = top_neighbors(affinity, i, k)
        neighbor_rows = []
        for j in neighbors:
            row = {
                "index": int(j),
                "affinity": float(affinity[i, j]),
                "label": int(labels[j]),
            }
            if predictions is not None:
                row["prediction"] = int(predictions[j])
            neighbor_rows.append(row)
        entry = {
            "index": i,
            "true_label": int(labels[i]),
            "ssc_label": int(assigned[i]),
            "isolated": profile.isolated,
            "profile": profile.weights.tolist(),
            "neighbors": neighbor_rows,
        }
        if predictions is not None:
            entry["network_prediction"] = int(predictions[i])
        query_rows.append(entry)

    return {
        "suite": "instance_analysis",
        "layer": record.layer_name,
        "epoch": record.epoch,
        "num_samples": labels.shape[0],
        "num_classes": num_classes,
        "neighbor_count": k,
        "summary": summary,
        "queries": query_rows,
        "solver": asdict(cfg),
    }


def _group_by_layer(records) -> dict[str, list[LayerRecord]]:
    by_layer: dict[str, list[LayerRecord]] = {}
    for rec in records:
        by_layer.setdefault(rec.layer_name, []).append(rec)
    return by_layer


def _load_checked(record: LayerRecord, num_samples: int) -> np.ndarray:
    x = load_record_matrix(record)
    if x.shape[1] != num_samples:
        raise ValueError(
            f"layer {record.layer_name!r} (epoch {record.epoch}) has {x.shape[1]} samples, "
            f"expected {num_samples}"
        )
    return x


def _named_pairwise(mats, names, kind: str) -> list[list[float]]:
    try:
        matrix = pairwise_cka(mats)
    except DegenerateKernelError as exc:
        index = _leading_int(str(exc))
        name = names[index] if index is not None else "?"
        raise DegenerateKernelError(f"layer {name!r} has a degenerate {kind} matrix: {exc}") from exc
    return matrix.tolist()


def _leading_int(message: str) -> int | None:
    for token in message.split():
        if token.isdigit():
            return int(token)
    return None


def _select_record(manifest: LayerManifest, layer: str | None, epoch: int | None) -> LayerRecord:
    records = list(manifest.records)
    if layer is not None:
        records = [rec for rec in records if rec.layer_name == layer]
        if not records:
            raise ValueError(f"no manifest record for layer {layer!r}")
    if epoch is not None:
        records = [rec for rec in records if rec.epoch == epoch]
        if not records:
            raise ValueError(f"no manifest record at epoch {epoch}")
    if len(records) != 1:
        keys = [(rec.layer_name, rec.epoch) for rec in records]
        raise ValueError(f"instance analysis needs exactly one record, matched {keys}")
    return records[0]


# ---------------------------------------------------------------------------
# result emission

# Anchors of a viridis-like ramp; linearly interpolated for display colors.
_RAMP = (
    (0.0, (0.267, 0.005, 0.329)),
    (0.15, (0.275, 0.194, 0.496)),
    (0.3, (0.212, 0.359, 0.552)),
    (0.45, (0.153, 0.497, 0.558)),
    (0.6, (0.122, 0.633, 0.530)),
    (0.75, (0.290, 0.759, 0.428)),
    (0.9, (0.626, 0.854, 0.223)),
    (1.0, (0.993, 0.906, 0.144)),
)


def _ramp_color(value: float) -> str:
    for (lo, lo_rgb), (hi, hi_rgb) in zip(_RAMP, _RAMP[1:]):
        if value <= hi:
            t = 0.0 if hi == lo else (value - lo) / (hi - lo)
            rgb = tuple(a + t * (b - a) for a, b in zip(lo_rgb, hi_rgb))
            break
    else:
        rgb = _RAMP[-1][1]
    return "#%02x%02x%02x" % tuple(int(round(255 * channel)) for channel in rgb)


def render_heatmap(matrix, path, cell: int = 24) -> None:
    """Write a deterministic SVG heatmap plus a sidecar CSV of exact values.

    Display colors clamp the values to [0, 1]; the CSV keeps full precision.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.ndim != 2:
        raise ValueError(f"heatmap input must be 2-D, got {matrix.ndim}-D")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("heatmap input has non-finite entries")
    path = Path(path)
    rows, cols = matrix.shape
    clamped = np.clip(matrix, 0.0, 1.0)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{cols * cell}" '
        f'height="{rows * cell}" viewBox="0 0 {cols * cell} {rows * cell}">\n',
    ]
    for r in range(rows):
        for col in range(cols):
            parts.append(
                f'<rect x="{col * cell}" y="{r * cell}" width="{cell}" height="{cell}" '
                f'fill="{_ramp_color(float(clamped[r, col]))}"/>\n'
            )
    parts.append("</svg>\n")
    atomic_write_text(path, "".join(parts))
    atomic_write_text(path.with_suffix(".csv"), matrix_to_csv_text(matrix))


def write_report(report: dict, path) -> None:
    """Serialize a report as stable, byte-reproducible JSON."""
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    atomic_write_text(path, text)


def write_matrix_csv(matrix, path) -> None:
    atomic_write_text(path, matrix_to_csv_text(matrix))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(key): _jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(value) for value in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")
