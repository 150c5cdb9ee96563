"""ADMM solver for the matrix-LASSO form of sparse subspace clustering.

Given activations X (one column per sample), finds a sparse self-expressive
coefficient matrix C with zero diagonal by alternating a ridge-type linear
solve, elementwise soft-thresholding, and a dual ascent step.  The symmetric
affinity graph |C| + |C|^T built from the solution is the object all
downstream analyses consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ._validate import check_activation_matrix, check_square_matrix


@dataclass(frozen=True)
class SscConfig:
    """Solver settings.

    ``tau`` weighs the reconstruction term against the l1 penalty, so larger
    values favour denser, more faithful reconstructions.  ``mu_init`` is the
    starting ADMM penalty; with ``adaptive_mu`` it grows by ``rho`` whenever
    the relative primal residual outruns the relative dual residual by more
    than ``residual_ratio``.  Column normalization makes ``tau`` scale-free
    and is on by default; zero columns are left untouched and flagged in the
    report.
    """

    tau: float = 10.0
    mu_init: float = 10.0
    adaptive_mu: bool = True
    rho: float = 2.0
    residual_ratio: float = 10.0
    max_iters: int = 200
    tol_abs: float = 2e-4
    normalize_columns: bool = True

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.mu_init > 0:
            raise ValueError(f"mu_init must be positive, got {self.mu_init}")
        if not self.rho > 1:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if not self.residual_ratio > 0:
            raise ValueError(f"residual_ratio must be positive, got {self.residual_ratio}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if not self.tol_abs > 0:
            raise ValueError(f"tol_abs must be positive, got {self.tol_abs}")


@dataclass(frozen=True)
class SolveReport:
    """Per-solve diagnostics.

    Histories have one entry per completed iteration.  ``z`` is the final
    splitting variable; on a converged solve max|z - C| < tol_abs.
    """

    iterations: int
    primal_residuals: tuple[float, ...]
    objective_values: tuple[float, ...]
    final_mu: float
    converged: bool
    zero_columns: tuple[int, ...]
    z: np.ndarray


def shrink(m, lam: float) -> np.ndarray:
    """Elementwise soft-threshold: sign(m) * max(|m| - lam, 0)."""
    m = np.asarray(m, dtype=np.float64)
    if not np.isfinite(lam) or lam < 0:
        raise ValueError(f"shrinkage threshold must be finite and >= 0, got {lam}")
    if not np.all(np.isfinite(m)):
        raise ValueError("shrink input has non-finite entries")
    return np.maximum(m - lam, 0.0) - np.maximum(-m - lam, 0.0)


def ssc_objective(x, c, tau: float) -> float:
    """Self-expression objective ||C||_1 + (tau/2) ||X - XC||_F^2."""
    x = check_activation_matrix(x)
    c = check_square_matrix(c, "coefficient matrix")
    if c.shape[0] != x.shape[1]:
        raise ValueError(
            f"coefficient matrix size {c.shape[0]} does not match sample count {x.shape[1]}"
        )
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    residual = x - x @ c
    return float(np.abs(c).sum() + 0.5 * tau * np.sum(residual * residual))


def build_affinity(c) -> np.ndarray:
    """Symmetric nonnegative affinity graph W = |C| + |C|^T.

    Bitwise symmetric: W_ij and W_ji are the same two floats added in either
    order, and IEEE addition commutes.
    """
    c = check_square_matrix(c, "coefficient matrix")
    if np.any(np.diagonal(c) != 0.0):
        raise ValueError("coefficient matrix must have an exactly zero diagonal")
    a = np.abs(c)
    return a + a.T


def solve_ssc(x, cfg: SscConfig = SscConfig()) -> tuple[np.ndarray, SolveReport]:
    """Solve min ||C||_1 + (tau/2)||X - XZ||_F^2  s.t.  Z = C - diag(C) by ADMM.

    Per iteration: Z from the SPD solve (tau X^T X + mu I) Z = tau X^T X +
    mu C - L, then C = shrink(Z + L/mu, 1/mu) with the diagonal zeroed, then
    the dual update L += mu (Z - C).  Stops when max|Z - C| < cfg.tol_abs or
    after cfg.max_iters iterations.  Works on the Gram matrix X^T X so the
    per-iteration cost does not depend on the number of neurons.

    Deterministic: identical inputs produce bitwise identical outputs.
    """
    x = check_activation_matrix(x)
    n = x.shape[1]
    work = x.copy()
    zero_columns: tuple[int, ...] = ()
    if cfg.normalize_columns:
        norms = np.linalg.norm(work, axis=0)
        zero = norms == 0.0
        if np.any(zero):
            zero_columns = tuple(int(i) for i in np.flatnonzero(zero))
            norms = np.where(zero, 1.0, norms)
        work /= norms

    gram = work.T @ work
    gram = (gram + gram.T) / 2.0
    tau_gram = cfg.tau * gram
    gram_trace = float(np.trace(gram))
    use_gram_objective = work.shape[0] > n

    mu = cfg.mu_init
    factor = _factorize(tau_gram, mu)

    c = np.zeros((n, n))
    dual = np.zeros((n, n))
    z = np.zeros((n, n))
    primal_hist: list[float] = []
    objective_hist: list[float] = []
    converged = False
    iterations = 0

    for _ in range(cfg.max_iters):
        z = cho_solve(factor, tau_gram + mu * c - dual)
        c_prev = c
        c = shrink(z + dual / mu, 1.0 / mu)
        np.fill_diagonal(c, 0.0)
        gap = z - c
        dual = dual + mu * gap

        primal = float(np.linalg.norm(gap))
        primal_hist.append(primal)
        objective_hist.append(
            _objective(work, gram, gram_trace, c, cfg.tau, use_gram_objective)
        )
        iterations += 1

        if float(np.max(np.abs(gap))) < cfg.tol_abs:
            converged = True
            break

        if cfg.adaptive_mu:
            # Residuals are compared on relative scales (primal against the
            # iterate norms, dual against the accumulated multiplier); the
            # raw norms live on incommensurate scales and comparing them
            # directly just ratchets mu downward.  Only the increase branch
            # is applied: shrinking mu while the l1 support is still churning
            # stalls the primal gap right above tolerance.
            dual_resid = mu * float(np.linalg.norm(c - c_prev))
            primal_scale = max(float(np.linalg.norm(z)), float(np.linalg.norm(c)), 1e-12)
            dual_scale = max(float(np.linalg.norm(dual)), 1e-12)
            if primal / primal_scale > cfg.residual_ratio * (dual_resid / dual_scale):
                mu *= cfg.rho
                factor = _factorize(tau_gram, mu)

    report = SolveReport(
        iterations=iterations,
        primal_residuals=tuple(primal_hist),
        objective_values=tuple(objective_hist),
        final_mu=mu,
        converged=converged,
        zero_columns=zero_columns,
        z=z,
    )
    return c, report


def _factorize(tau_gram: np.ndarray, mu: float):
    shifted = tau_gram + mu * np.eye(tau_gram.shape[0])
    try:
        return cho_factor(shifted, lower=True)
    except np.linalg.LinAlgError as exc:  # should not happen for mu > 0
        raise RuntimeError(f"internal error: SPD factorization failed: {exc}") from exc


def _objective(work, gram, gram_trace, c, tau, use_gram) -> float:
    # trace((I-C)^T G (I-C)) avoids touching the d-by-N matrix when d >> N.
    if use_gram:
        gc = gram @ c
        recon = gram_trace - 2.0 * float(np.sum(gram * c)) + float(np.sum(c * gc))
        recon = max(recon, 0.0)
    else:
        residual = work - work @ c
        recon = float(np.sum(residual * residual))
    return float(np.abs(c).sum() + 0.5 * tau * recon)
