"""Shared input checks for dense matrices."""

import numpy as np


def check_activation_matrix(x) -> np.ndarray:
    """Coerce to a float64 d-by-N activation matrix (columns are samples)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"activation matrix must be 2-D, got {x.ndim}-D")
    d, n = x.shape
    if d < 1:
        raise ValueError("activation matrix needs at least one row (neuron)")
    if n < 2:
        raise ValueError(f"activation matrix needs at least 2 samples, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("activation matrix has non-finite entries")
    return x


def check_square_matrix(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m
