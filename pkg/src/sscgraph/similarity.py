"""HSIC and centered kernel alignment between N-by-N similarity matrices.

Works on any symmetric matrix over the same sample set: SSC affinity graphs,
linear Gram matrices, or anything else kernel-shaped.  Affinity graphs need
not be positive semidefinite, so alignment scores can in principle be
negative; they are reported as-is.
"""

from __future__ import annotations

import math

import numpy as np

from ._validate import check_activation_matrix, check_square_matrix

# Relative asymmetry allowed before a matrix is rejected (symmetrized below it).
_SYM_RTOL = 1e-12


class DegenerateKernelError(ValueError):
    """A similarity matrix centers to (numerically) zero, so CKA is undefined."""


def _as_similarity(m, name: str = "similarity matrix") -> np.ndarray:
    m = check_square_matrix(m, name)
    if m.shape[0] < 2:
        raise ValueError(f"{name} needs at least 2 samples, got {m.shape[0]}")
    scale = max(float(np.abs(m).max()), 1.0)
    if float(np.abs(m - m.T).max()) > _SYM_RTOL * scale:
        raise ValueError(f"{name} is not symmetric within tolerance")
    return (m + m.T) / 2.0


def _double_center(m: np.ndarray) -> np.ndarray:
    # Equivalent to H M H with H = I - (1/N) 11^T, in O(N^2).
    row = m.mean(axis=1, keepdims=True)
    col = m.mean(axis=0, keepdims=True)
    grand = m.mean()
    return m - row - col + grand


def center(m) -> np.ndarray:
    """Project out row and column means (H M H with the centering matrix H)."""
    return _double_center(_as_similarity(m))


def hsic(a, b) -> float:
    """trace(HAH * HBH) / (N-1)^2, a dependence measure between two kernels."""
    a = _as_similarity(a, "first matrix")
    b = _as_similarity(b, "second matrix")
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    n = a.shape[0]
    ca = _double_center(a)
    cb = _double_center(b)
    return float(np.sum(ca * cb)) / (n - 1) ** 2


def _alignment(ca, cb, self_a, self_b, denom) -> float:
    return float(np.sum(ca * cb)) / denom / math.sqrt(self_a * self_b)


def cka(a, b) -> float:
    """hsic(A,B) / sqrt(hsic(A,A) hsic(B,B)), in [-1, 1].

    Raises DegenerateKernelError when either self-HSIC falls at or below
    1e-12 * N^2, rather than returning a silent 0 or NaN.
    """
    a = _as_similarity(a, "first matrix")
    b = _as_similarity(b, "second matrix")
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    n = a.shape[0]
    denom = (n - 1) ** 2
    ca = _double_center(a)
    cb = _double_center(b)
    self_a = float(np.sum(ca * ca)) / denom
    self_b = float(np.sum(cb * cb)) / denom
    eps = 1e-12 * n * n
    if self_a <= eps:
        raise DegenerateKernelError(
            f"first matrix is degenerate: hsic(A,A)={self_a:.3e} <= {eps:.3e}"
        )
    if self_b <= eps:
        raise DegenerateKernelError(
            f"second matrix is degenerate: hsic(B,B)={self_b:.3e} <= {eps:.3e}"
        )
    return _alignment(ca, cb, self_a, self_b, denom)


def linear_gram(x) -> np.ndarray:
    """Linear kernel over samples: X^T X, symmetric positive semidefinite."""
    x = check_activation_matrix(x)
    g = x.T @ x
    return (g + g.T) / 2.0


def pairwise_cka(mats) -> np.ndarray:
    """All-pairs CKA over a list of same-size similarity matrices.

    Each unordered pair is evaluated once and mirrored, so the output is
    exactly symmetric.  Entries match independent cka() calls bit for bit.
    """
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one similarity matrix")
    sym = [_as_similarity(m, f"matrix {i}") for i, m in enumerate(mats)]
    shape = sym[0].shape
    for i, m in enumerate(sym):
        if m.shape != shape:
            raise ValueError(f"matrix {i} has shape {m.shape}, expected {shape}")
    n = shape[0]
    denom = (n - 1) ** 2
    eps = 1e-12 * n * n

    centered = [_double_center(m) for m in sym]
    selfs = [float(np.sum(c * c)) / denom for c in centered]
    for i, h in enumerate(selfs):
        if h <= eps:
            raise DegenerateKernelError(
                f"matrix {i} is degenerate: self-hsic {h:.3e} <= {eps:.3e}"
            )

    count = len(sym)
    out = np.empty((count, count))
    for i in range(count):
        for j in range(i, count):
            value = _alignment(centered[i], centered[j], selfs[i], selfs[j], denom)
            out[i, j] = value
            out[j, i] = value
    return out
