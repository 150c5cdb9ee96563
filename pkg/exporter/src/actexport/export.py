"""Checkpoint-driven activation export in the analysis pipeline's formats.

Checkpoints are self-contained: they carry the architecture parameters and
the data recipe (seed), so an export is reproducible from the file alone
with a deterministic sample order.  Output is one d-by-N float32 NPY per
selected layer plus labels/predictions files and a JSON manifest.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .capture import FLATTEN_POLICIES, capture_activations, predict_classes
from .toy_fixture import (
    MLP_BLOCKS,
    ToyMlp,
    ToyTrainConfig,
    make_blobs,
    resolve_block_selectors,
    train_toy_mlp,
)


@dataclass(frozen=True)
class ExportSpec:
    checkpoint: Path
    layer_selectors: tuple[str, ...]
    num_samples: int
    flatten: str = "full_flatten"
    out_dir: Path = Path("export")
    epoch: int | None = None
    capture_point: str = "post"

    def __post_init__(self):
        if not self.layer_selectors:
            raise ValueError("need at least one layer selector")
        if self.num_samples < 2:
            raise ValueError(f"num_samples must be at least 2, got {self.num_samples}")
        if self.flatten not in FLATTEN_POLICIES:
            raise ValueError(f"unknown flatten policy {self.flatten!r}")


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_npy(array: np.ndarray, path: Path) -> None:
    buf = io.BytesIO()
    np.save(buf, array)
    _atomic_write_bytes(path, buf.getvalue())


def save_labels(labels: np.ndarray, path: Path) -> None:
    _atomic_write_bytes(path, ("\n".join(str(int(v)) for v in labels) + "\n").encode())


def save_checkpoint(model: ToyMlp, hidden_dim: int, data_seed: int, epoch: int, path: Path) -> None:
    payload = {
        "arch": {"hidden_dim": hidden_dim, "num_classes": 3},
        "state_dict": model.state_dict(),
        "data_seed": data_seed,
        "epoch": epoch,
    }
    buf = io.BytesIO()
    torch.save(payload, buf)
    _atomic_write_bytes(path, buf.getvalue())


def load_checkpoint(path: Path) -> tuple[ToyMlp, int, int]:
    """Returns (model, data_seed, epoch)."""
    if not Path(path).exists():
        raise FileNotFoundError(f"checkpoint does not exist: {path}")
    payload = torch.load(path, map_location="cpu", weights_only=True)
    model = ToyMlp(hidden_dim=int(payload["arch"]["hidden_dim"]),
                   num_classes=int(payload["arch"]["num_classes"]))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, int(payload["data_seed"]), int(payload["epoch"])


def export_activations(spec: ExportSpec) -> Path:
    """Export per-layer activations for one checkpoint; returns the manifest path.

    Layer selectors may be toy-MLP block names (hidden1..hidden3, resolved
    through the capture_point flag) or raw module names.
    """
    torch.set_num_threads(1)
    model, data_seed, ckpt_epoch = load_checkpoint(spec.checkpoint)
    epoch = spec.epoch if spec.epoch is not None else ckpt_epoch
    x_np, y_np = make_blobs(data_seed)
    if spec.num_samples > x_np.shape[0]:
        raise ValueError(f"num_samples {spec.num_samples} exceeds dataset size {x_np.shape[0]}")
    inputs = torch.from_numpy(x_np[: spec.num_samples])
    labels = y_np[: spec.num_samples]

    module_names = resolve_block_selectors(spec.layer_selectors, spec.capture_point)
    captured = capture_activations(model, inputs, module_names, flatten=spec.flatten)

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for selector, module_name in zip(spec.layer_selectors, module_names):
        fname = f"{selector}_e{epoch}.npy"
        save_npy(captured[module_name], out / fname)
        records.append({"layer_name": selector, "epoch": epoch, "matrix_path": fname})

    save_labels(labels, out / "labels.txt")
    save_labels(predict_classes(model, inputs), out / "predictions.txt")
    manifest = {
        "records": records,
        "labels_path": "labels.txt",
        "predictions_path": "predictions.txt",
    }
    path = out / "manifest.json"
    _atomic_write_bytes(path, (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode())
    return path


def build_toy_fixture(seed: int, out_dir, cfg: ToyTrainConfig | None = None) -> Path:
    """Train the toy MLP and export all hidden layers at the snapshot epochs.

    Writes one NPY per (layer, epoch), ground-truth labels, final-model
    predictions, per-epoch checkpoints, and a combined manifest ordered by
    depth.  Fails loudly if training misses the accuracy bar.  Returns the
    manifest path.
    """
    cfg = cfg if cfg is not None else ToyTrainConfig(seed=seed)
    if cfg.seed != seed:
        cfg = ToyTrainConfig(
            seed=seed,
            hidden_dim=cfg.hidden_dim,
            epochs=cfg.epochs,
            snapshot_epochs=cfg.snapshot_epochs,
            learning_rate=cfg.learning_rate,
            accuracy_bar=cfg.accuracy_bar,
        )
    model, snapshots, x_np, y_np = train_toy_mlp(cfg)
    inputs = torch.from_numpy(x_np)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    blocks = list(MLP_BLOCKS)
    module_names = resolve_block_selectors(blocks, "post")
    per_epoch: dict[int, dict[str, np.ndarray]] = {}
    probe = ToyMlp(hidden_dim=cfg.hidden_dim)
    for epoch in cfg.snapshot_epochs:
        probe.load_state_dict(snapshots[epoch])
        probe.eval()
        per_epoch[epoch] = capture_activations(probe, inputs, module_names)
        save_checkpoint(probe, cfg.hidden_dim, seed, epoch, out / f"checkpoint_e{epoch}.pt")

    records = []
    for block, module_name in zip(blocks, module_names):
        for epoch in cfg.snapshot_epochs:
            fname = f"{block}_e{epoch}.npy"
            save_npy(per_epoch[epoch][module_name], out / fname)
            records.append({"layer_name": block, "epoch": epoch, "matrix_path": fname})

    save_labels(y_np, out / "labels.txt")
    save_labels(predict_classes(model, inputs), out / "predictions.txt")
    manifest = {
        "records": records,
        "labels_path": "labels.txt",
        "predictions_path": "predictions.txt",
    }
    path = out / "manifest.json"
    _atomic_write_bytes(path, (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode())
    return path
