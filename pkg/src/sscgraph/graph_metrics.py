"""Class-structure analysis of affinity graphs.

Modularity of the class partition, per-node class-affinity profiles,
affinity-based label assignment, label agreement, spectral embeddings and
nearest-neighbor retrieval.  All functions treat the graph as weighted; the
unweighted reading is recovered exactly for 0/1 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validate import check_square_matrix

_SYM_RTOL = 1e-12


class EmptyGraphError(ValueError):
    """The affinity graph has no edges at all."""


class DegenerateDegreeError(ValueError):
    """Zero-degree nodes make the normalized Laplacian undefined."""


@dataclass(frozen=True)
class ClassProfile:
    """Per-class share of one node's affinity mass; all-zero when isolated."""

    weights: np.ndarray
    isolated: bool


@dataclass(frozen=True)
class Embedding:
    """Eigenvector coordinates (N-by-k) with their eigenvalues.

    Eigenvalues are sorted in selection order: descending for affinity mode
    (largest first), ascending for normalized-Laplacian mode (smallest
    first).  Each column has unit norm and its first nonzero entry positive.
    """

    coordinates: np.ndarray
    eigenvalues: np.ndarray
    mode: str


def _check_affinity(w) -> np.ndarray:
    w = check_square_matrix(w, "affinity matrix")
    scale = max(float(np.abs(w).max()), 1.0)
    if float(np.abs(w - w.T).max()) > _SYM_RTOL * scale:
        raise ValueError("affinity matrix is not symmetric within tolerance")
    return (w + w.T) / 2.0


def _check_labels(labels, n: int, num_classes: int | None = None) -> tuple[np.ndarray, int]:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError(f"labels must be 1-D, got {labels.ndim}-D")
    if labels.shape[0] != n:
        raise ValueError(f"label count {labels.shape[0]} does not match {n} nodes")
    if not np.issubdtype(labels.dtype, np.integer):
        raise ValueError(f"labels must be integers, got dtype {labels.dtype}")
    labels = labels.astype(np.int64)
    if labels.min() < 0:
        raise ValueError("labels must be nonnegative class ids")
    k = int(labels.max()) + 1
    if num_classes is not None:
        if num_classes < k:
            raise ValueError(f"num_classes={num_classes} but labels reach {k - 1}")
        k = num_classes
    return labels, k


def modularity(w, labels) -> float:
    """Within-class edge weight relative to the degree null model.

    Q = (1/2m) sum_ij (W_ij - k_i k_j / 2m) delta(c_i, c_j) with weighted
    degrees k_i and total weight 2m = sum_ij W_ij, aggregated per class so
    exact cases (disjoint cliques, single community) come out exact.
    """
    w = _check_affinity(w)
    labels, _ = _check_labels(labels, w.shape[0])
    total = float(w.sum())
    if total == 0.0:
        raise EmptyGraphError("affinity graph has no edges")
    degrees = w.sum(axis=1)
    q = 0.0
    for c in np.unique(labels):
        mask = labels == c
        within = float(w[np.ix_(mask, mask)].sum())
        class_degree = float(degrees[mask].sum())
        q += within / total - (class_degree / total) ** 2
    return float(q)


def class_affinity_profile(w, labels, i: int, num_classes: int | None = None) -> ClassProfile:
    """Node i's affinity mass per class, normalized to a distribution.

    Raw class sums are normalized as-is; on class-imbalanced reference sets
    a frequent class gets more candidate neighbors, so divide by class
    frequency downstream if that bias matters for the analysis.
    """
    w = _check_affinity(w)
    labels, k = _check_labels(labels, w.shape[0], num_classes)
    if not 0 <= i < w.shape[0]:
        raise IndexError(f"node index {i} out of range for {w.shape[0]} nodes")
    sums = np.bincount(labels, weights=w[i], minlength=k)
    total = float(sums.sum())
    if total == 0.0:
        return ClassProfile(weights=np.zeros(k), isolated=True)
    return ClassProfile(weights=sums / total, isolated=False)


def ssc_labels(w, labels, num_classes: int | None = None) -> np.ndarray:
    """Assign each node the class holding its largest aggregate affinity.

    Ties break toward the lower class id; isolated nodes fall to class 0.
    Invariant under positive rescaling of the graph.
    """
    w = _check_affinity(w)
    labels, k = _check_labels(labels, w.shape[0], num_classes)
    indicator = np.zeros((w.shape[0], k))
    indicator[np.arange(w.shape[0]), labels] = 1.0
    mass = w @ indicator
    return mass.argmax(axis=1).astype(np.int64)


def isolated_nodes(w) -> np.ndarray:
    """Indices of zero-degree nodes (diagnostics for label assignment)."""
    w = _check_affinity(w)
    return np.flatnonzero(w.sum(axis=1) == 0.0)


def agreement(a, b) -> float:
    """Fraction of positions where the two label vectors coincide."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("label vectors must be 1-D")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.mean(a == b))


def spectral_embedding(w, k: int = 2, mode: str = "affinity") -> Embedding:
    """Top eigenvector coordinates of the graph.

    affinity mode: eigenvectors for the k algebraically largest eigenvalues
    of W.  normalized_laplacian mode: eigenvectors for the k smallest
    eigenvalues of L = I - D^{-1/2} W D^{-1/2}; zero-degree nodes are
    rejected because D^{-1/2} is undefined there.
    """
    w = _check_affinity(w)
    n = w.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"embedding dimension k={k} must satisfy 1 <= k < N={n}")
    if mode == "affinity":
        values, vectors = np.linalg.eigh(w)
        values = values[::-1][:k]
        vectors = vectors[:, ::-1][:, :k]
    elif mode == "normalized_laplacian":
        degrees = w.sum(axis=1)
        dead = np.flatnonzero(degrees == 0.0)
        if dead.size:
            raise DegenerateDegreeError(
                f"zero-degree nodes {dead.tolist()} have no normalized Laplacian entry"
            )
        inv_sqrt = 1.0 / np.sqrt(degrees)
        lap = np.eye(n) - inv_sqrt[:, None] * w * inv_sqrt[None, :]
        lap = (lap + lap.T) / 2.0
        values, vectors = np.linalg.eigh(lap)
        values = values[:k]
        vectors = vectors[:, :k]
    else:
        raise ValueError(f"unknown embedding mode {mode!r}")

    vectors = vectors.copy()
    for j in range(k):
        col = vectors[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12 * float(np.abs(col).max()))
        if nz.size and col[nz[0]] < 0:
            vectors[:, j] = -col
    return Embedding(coordinates=vectors, eigenvalues=np.asarray(values, dtype=float), mode=mode)


def top_neighbors(w, i: int, k: int) -> np.ndarray:
    """Indices of the k strongest neighbors of node i, strongest first.

    Ties break toward the lower index; the node itself is excluded.
    """
    w = _check_affinity(w)
    n = w.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"node index {i} out of range for {n} nodes")
    if not 0 <= k <= n - 1:
        raise ValueError(f"neighbor count k={k} must satisfy 0 <= k <= N-1={n - 1}")
    row = w[i]
    order = np.lexsort((np.arange(n), -row))
    order = order[order != i]
    return order[:k]
