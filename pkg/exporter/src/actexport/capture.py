"""Forward-hook activation capture with flatten policies.

Activations come out as d-by-N float32 matrices, one column per input sample
in dataset order, matching what the analysis pipeline ingests.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

FLATTEN_POLICIES = ("full_flatten", "spatial_average")


def flatten_features(batch: torch.Tensor, policy: str) -> torch.Tensor:
    """Collapse per-sample feature maps to vectors.

    full_flatten keeps every value (C*H*W features); spatial_average keeps
    one value per channel.  Already-flat (N, F) outputs pass through either
    way.
    """
    if policy not in FLATTEN_POLICIES:
        raise ValueError(f"unknown flatten policy {policy!r}, expected one of {FLATTEN_POLICIES}")
    if batch.ndim < 2:
        raise ValueError(f"captured activation must have a batch axis, got shape {tuple(batch.shape)}")
    if batch.ndim == 2:
        return batch
    if policy == "full_flatten":
        return batch.reshape(batch.shape[0], -1)
    return batch.mean(dim=tuple(range(2, batch.ndim)))


def capture_activations(
    model: nn.Module,
    inputs: torch.Tensor,
    layer_names: list[str],
    flatten: str = "full_flatten",
    batch_size: int = 256,
) -> dict[str, np.ndarray]:
    """Run the model over inputs and collect named-module outputs.

    Returns {layer_name: (d, N) float32 array} with columns in input order;
    batching never changes the result, only peak memory.
    """
    modules = dict(model.named_modules())
    missing = [name for name in layer_names if name not in modules]
    if missing:
        raise ValueError(f"model has no modules named {missing}; available: {sorted(modules)[:20]}")

    chunks: dict[str, list[torch.Tensor]] = {name: [] for name in layer_names}
    hooks = []

    def make_hook(name):
        def hook(_module, _inputs, output):
            if not isinstance(output, torch.Tensor):
                raise ValueError(f"layer {name!r} produced {type(output).__name__}, not a tensor")
            chunks[name].append(flatten_features(output.detach(), flatten))

        return hook

    for name in layer_names:
        hooks.append(modules[name].register_forward_hook(make_hook(name)))
    try:
        model.eval()
        with torch.no_grad():
            for start in range(0, inputs.shape[0], batch_size):
                model(inputs[start : start + batch_size])
    finally:
        for handle in hooks:
            handle.remove()

    out = {}
    for name in layer_names:
        stacked = torch.cat(chunks[name], dim=0)
        if stacked.shape[0] != inputs.shape[0]:
            raise ValueError(
                f"layer {name!r} emitted {stacked.shape[0]} rows for {inputs.shape[0]} samples; "
                "module ran more than once per forward pass"
            )
        out[name] = stacked.T.contiguous().numpy().astype(np.float32, copy=False)
    return out


def predict_classes(model: nn.Module, inputs: torch.Tensor, batch_size: int = 256) -> np.ndarray:
    model.eval()
    parts = []
    with torch.no_grad():
        for start in range(0, inputs.shape[0], batch_size):
            logits = model(inputs[start : start + batch_size])
            parts.append(logits.argmax(dim=1))
    return torch.cat(parts).numpy().astype(np.int64)
