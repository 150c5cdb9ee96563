import numpy as np
import pytest

from sscgraph import (
    SscConfig,
    SyntheticConfig,
    gen_synthetic,
    solve_ssc,
    subspace_preserving_ratio,
)


class TestConfig:
    def test_subspace_dim_must_be_below_ambient(self):
        with pytest.raises(ValueError):
            SyntheticConfig(num_subspaces=2, ambient_dim=4, subspace_dim=4, points_per_subspace=6)

    def test_needs_enough_points_for_self_expression(self):
        with pytest.raises(ValueError):
            SyntheticConfig(num_subspaces=2, ambient_dim=10, subspace_dim=3, points_per_subspace=3)

    def test_negative_noise_rejected(self):
        with pytest.raises(ValueError):
            SyntheticConfig(
                num_subspaces=2, ambient_dim=10, subspace_dim=3, points_per_subspace=5,
                noise_std=-0.1,
            )


class TestGeneration:
    def test_single_noiseless_subspace_has_bounded_rank(self):
        cfg = SyntheticConfig(
            num_subspaces=1, ambient_dim=20, subspace_dim=3, points_per_subspace=15, seed=0
        )
        x, labels = gen_synthetic(cfg)
        assert x.shape == (20, 15)
        assert np.linalg.matrix_rank(x, tol=1e-10) <= 3
        assert np.array_equal(labels, np.zeros(15, dtype=int))

    def test_deterministic_per_seed(self):
        cfg = SyntheticConfig(
            num_subspaces=3, ambient_dim=12, subspace_dim=2, points_per_subspace=8, noise_std=0.05,
            seed=9,
        )
        x1, l1 = gen_synthetic(cfg)
        x2, l2 = gen_synthetic(cfg)
        assert np.array_equal(x1, x2)
        assert np.array_equal(l1, l2)

    def test_unit_norm_when_noiseless(self):
        cfg = SyntheticConfig(
            num_subspaces=2, ambient_dim=10, subspace_dim=2, points_per_subspace=6, seed=1
        )
        x, _ = gen_synthetic(cfg)
        assert np.allclose(np.linalg.norm(x, axis=0), 1.0, atol=1e-12)

    def test_solver_is_subspace_preserving_downstream(self):
        cfg = SyntheticConfig(
            num_subspaces=3, ambient_dim=20, subspace_dim=3, points_per_subspace=12, seed=5
        )
        x, labels = gen_synthetic(cfg)
        coeffs, _ = solve_ssc(x, SscConfig())
        assert subspace_preserving_ratio(coeffs, labels).mean() >= 0.95


class TestSubspacePreservingRatio:
    def test_hand_built_coefficients(self):
        c = np.array(
            [
                [0.0, 1.0, 0.0],
                [3.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
            ]
        )
        labels = np.array([0, 0, 1])
        # column 0: |3| on same-label row 1, |1| on cross-label row 2
        ratios = subspace_preserving_ratio(c, labels)
        assert ratios[0] == pytest.approx(0.75)
        assert ratios[1] == pytest.approx(1.0)
        assert ratios[2] == 0.0  # no mass at all

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            subspace_preserving_ratio(np.zeros((3, 3)), np.array([0, 1]))
