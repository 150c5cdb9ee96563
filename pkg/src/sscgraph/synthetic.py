"""Seeded union-of-subspaces data for solver verification.

Draws K random r-dimensional subspaces of R^d, places n unit-norm points on
each, and optionally perturbs them with Gaussian noise.  The ground-truth
subspace ids double as class labels, which is what makes the
subspace-preserving check possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validate import check_square_matrix


@dataclass(frozen=True)
class SyntheticConfig:
    num_subspaces: int
    ambient_dim: int
    subspace_dim: int
    points_per_subspace: int
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.num_subspaces < 1:
            raise ValueError(f"need at least one subspace, got {self.num_subspaces}")
        if self.subspace_dim < 1:
            raise ValueError(f"subspace_dim must be positive, got {self.subspace_dim}")
        if self.subspace_dim >= self.ambient_dim:
            raise ValueError(
                f"subspace_dim {self.subspace_dim} must be below ambient_dim {self.ambient_dim}"
            )
        # Self-expression needs at least r other points in the same subspace.
        if self.points_per_subspace < self.subspace_dim + 1:
            raise ValueError(
                f"points_per_subspace {self.points_per_subspace} must be at least "
                f"subspace_dim + 1 = {self.subspace_dim + 1}"
            )
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be nonnegative, got {self.noise_std}")


def gen_synthetic(cfg: SyntheticConfig) -> tuple[np.ndarray, np.ndarray]:
    """Sample the configured union of subspaces; deterministic per seed."""
    rng = np.random.default_rng(cfg.seed)
    blocks = []
    for _ in range(cfg.num_subspaces):
        basis, _ = np.linalg.qr(rng.standard_normal((cfg.ambient_dim, cfg.subspace_dim)))
        points = basis @ rng.standard_normal((cfg.subspace_dim, cfg.points_per_subspace))
        points /= np.linalg.norm(points, axis=0)
        if cfg.noise_std > 0:
            points = points + cfg.noise_std * rng.standard_normal(points.shape)
        blocks.append(points)
    x = np.concatenate(blocks, axis=1)
    labels = np.repeat(np.arange(cfg.num_subspaces, dtype=np.int64), cfg.points_per_subspace)
    return x, labels


def subspace_preserving_ratio(c, labels) -> np.ndarray:
    """Per-column share of absolute coefficient mass on same-label columns.

    Columns with no mass at all score 0.
    """
    c = check_square_matrix(c, "coefficient matrix")
    labels = np.asarray(labels)
    if labels.shape[0] != c.shape[0]:
        raise ValueError(f"label count {labels.shape[0]} does not match {c.shape[0]} columns")
    mass = np.abs(c)
    same = labels[:, None] == labels[None, :]
    total = mass.sum(axis=0)
    kept = (mass * same).sum(axis=0)
    ratios = np.zeros_like(total)
    nonzero = total > 0
    ratios[nonzero] = kept[nonzero] / total[nonzero]
    return ratios
