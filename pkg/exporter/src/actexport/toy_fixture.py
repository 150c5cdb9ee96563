"""Toy-MLP training fixture: seeded blobs, a 3-hidden-layer net, snapshots.

Everything is deterministic per seed: data, initialization, full-batch
training (no shuffling, no augmentation), and the exported activations.
The fixture exists so the analysis pipeline's trend checks run on a real
trained network at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

# Deliberate class overlap: the net still memorizes past 95% train accuracy,
# but shallow-layer neighborhoods stay mixed, so class structure has to be
# built up over depth instead of being free in the inputs.
BLOB_CENTERS = ((0.0, 2.4), (-2.1, -1.2), (2.1, -1.2))
BLOB_STD = 1.4
POINTS_PER_CLASS = 100

# Block name -> (pre-activation module, post-activation module)
MLP_BLOCKS = {
    "hidden1": ("fc1", "relu1"),
    "hidden2": ("fc2", "relu2"),
    "hidden3": ("fc3", "relu3"),
}


@dataclass(frozen=True)
class ToyTrainConfig:
    seed: int = 17
    hidden_dim: int = 48
    epochs: int = 400
    snapshot_epochs: tuple[int, ...] = (1, 200, 400)
    learning_rate: float = 5e-3
    accuracy_bar: float = 0.95

    def __post_init__(self):
        if sorted(set(self.snapshot_epochs)) != list(self.snapshot_epochs):
            raise ValueError("snapshot_epochs must be strictly increasing")
        if self.snapshot_epochs[-1] != self.epochs:
            raise ValueError("the last snapshot must be the final epoch")


class ToyMlp(nn.Module):
    """2-D input, three ReLU hidden layers, linear head.

    The `embed` identity module exposes the raw inputs as a capturable
    "layer zero" for alignment checks.
    """

    def __init__(self, hidden_dim: int = 32, num_classes: int = 3):
        super().__init__()
        self.embed = nn.Identity()
        self.fc1 = nn.Linear(2, hidden_dim)
        self.relu1 = nn.ReLU()
        self.fc2 = nn.Linear(hidden_dim, hidden_dim)
        self.relu2 = nn.ReLU()
        self.fc3 = nn.Linear(hidden_dim, hidden_dim)
        self.relu3 = nn.ReLU()
        self.head = nn.Linear(hidden_dim, num_classes)

    def forward(self, x):
        x = self.embed(x)
        x = self.relu1(self.fc1(x))
        x = self.relu2(self.fc2(x))
        x = self.relu3(self.fc3(x))
        return self.head(x)


def make_blobs(seed: int) -> tuple[np.ndarray, np.ndarray]:
    """300 points from three seeded 2-D Gaussian blobs, in fixed order."""
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for cls, center in enumerate(BLOB_CENTERS):
        pts = np.asarray(center) + BLOB_STD * rng.standard_normal((POINTS_PER_CLASS, 2))
        xs.append(pts)
        ys.append(np.full(POINTS_PER_CLASS, cls))
    return np.concatenate(xs).astype(np.float32), np.concatenate(ys).astype(np.int64)


def train_toy_mlp(cfg: ToyTrainConfig) -> tuple[ToyMlp, dict[int, dict], np.ndarray, np.ndarray]:
    """Full-batch training with per-epoch snapshots of the state dict.

    Returns (trained model, {epoch: state_dict copy}, inputs, labels).
    """
    torch.manual_seed(cfg.seed)
    torch.set_num_threads(1)
    x_np, y_np = make_blobs(cfg.seed)
    inputs = torch.from_numpy(x_np)
    targets = torch.from_numpy(y_np)

    model = ToyMlp(hidden_dim=cfg.hidden_dim)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
    loss_fn = nn.CrossEntropyLoss()

    snapshots: dict[int, dict] = {}
    wanted = set(cfg.snapshot_epochs)
    for epoch in range(1, cfg.epochs + 1):
        model.train()
        optimizer.zero_grad()
        loss = loss_fn(model(inputs), targets)
        loss.backward()
        optimizer.step()
        if epoch in wanted:
            snapshots[epoch] = {k: v.detach().clone() for k, v in model.state_dict().items()}

    model.eval()
    with torch.no_grad():
        accuracy = float((model(inputs).argmax(dim=1) == targets).float().mean())
    if accuracy < cfg.accuracy_bar:
        raise RuntimeError(
            f"toy fixture training reached only {accuracy:.3f} train accuracy "
            f"(needs >= {cfg.accuracy_bar}); refusing to build a weak fixture"
        )
    return model, snapshots, x_np, y_np


def resolve_block_selectors(selectors, capture_point: str = "post") -> list[str]:
    """Map hidden-block names to concrete module names for the toy MLP."""
    if capture_point not in ("post", "pre"):
        raise ValueError(f"capture_point must be 'post' or 'pre', got {capture_point!r}")
    names = []
    for sel in selectors:
        if sel in MLP_BLOCKS:
            pre, post = MLP_BLOCKS[sel]
            names.append(post if capture_point == "post" else pre)
        else:
            names.append(sel)
    return names
