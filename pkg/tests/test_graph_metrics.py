import numpy as np
import pytest

from sscgraph import (
    DegenerateDegreeError,
    EmptyGraphError,
    agreement,
    class_affinity_profile,
    isolated_nodes,
    modularity,
    spectral_embedding,
    ssc_labels,
    top_neighbors,
)

from oracles import modularity_double_loop


def two_triangles():
    w = np.zeros((6, 6))
    for a, b in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]:
        w[a, b] = w[b, a] = 1.0
    labels = np.array([0, 0, 0, 1, 1, 1])
    return w, labels


def random_affinity(rng, n):
    m = np.abs(rng.standard_normal((n, n)))
    w = m + m.T
    np.fill_diagonal(w, 0.0)
    return w


class TestModularity:
    def test_two_disjoint_triangles(self):
        w, labels = two_triangles()
        assert modularity(w, labels) == 0.5  # exact

    def test_single_community_is_zero(self):
        rng = np.random.default_rng(0)
        w = random_affinity(rng, 7)
        assert modularity(w, np.zeros(7, dtype=int)) == 0.0  # exact

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            n = int(rng.integers(4, 40))
            w = random_affinity(rng, n)
            labels = rng.integers(0, 4, size=n)
            assert modularity(w, labels) == pytest.approx(
                modularity_double_loop(w, labels), abs=1e-10
            )

    def test_empty_graph_rejected(self):
        with pytest.raises(EmptyGraphError):
            modularity(np.zeros((4, 4)), np.zeros(4, dtype=int))

    def test_label_length_mismatch(self):
        w, _ = two_triangles()
        with pytest.raises(ValueError):
            modularity(w, np.zeros(5, dtype=int))


class TestClassAffinityProfile:
    def test_one_hot_when_mass_on_single_class(self):
        w = np.zeros((4, 4))
        w[0, 2] = w[2, 0] = 3.0
        w[0, 3] = w[3, 0] = 1.0
        labels = np.array([0, 1, 2, 2])
        profile = class_affinity_profile(w, labels, 0)
        assert not profile.isolated
        assert np.allclose(profile.weights, [0.0, 0.0, 1.0])

    def test_uniform_row_balanced_classes(self):
        n = 6
        w = np.ones((n, n))
        np.fill_diagonal(w, 0.0)
        # node 0 sees 1 unit from its own class (node 1) and 2 from each other class
        labels = np.array([0, 0, 1, 1, 2, 2])
        profile = class_affinity_profile(w, labels, 2)
        assert np.allclose(profile.weights, [0.4, 0.2, 0.4])

    def test_hand_built_six_node_instance(self):
        w = np.zeros((6, 6))
        pairs = {(0, 1): 2.0, (0, 3): 1.0, (0, 4): 1.0, (2, 5): 4.0}
        for (a, b), v in pairs.items():
            w[a, b] = w[b, a] = v
        labels = np.array([0, 0, 0, 1, 1, 1])
        profile = class_affinity_profile(w, labels, 0)
        assert np.allclose(profile.weights, [0.5, 0.5])

    def test_weights_sum_to_one(self):
        rng = np.random.default_rng(2)
        w = random_affinity(rng, 12)
        labels = rng.integers(0, 3, size=12)
        for i in range(12):
            profile = class_affinity_profile(w, labels, i)
            assert profile.weights.sum() == pytest.approx(1.0, abs=1e-10)

    def test_isolated_node_flagged(self):
        w = np.zeros((3, 3))
        w[1, 2] = w[2, 1] = 1.0
        profile = class_affinity_profile(w, np.array([0, 0, 1]), 0)
        assert profile.isolated
        assert np.all(profile.weights == 0.0)

    def test_index_out_of_range(self):
        w, labels = two_triangles()
        with pytest.raises(IndexError):
            class_affinity_profile(w, labels, 6)


class TestSscLabels:
    def test_block_diagonal_recovers_labels(self):
        w, labels = two_triangles()
        assert np.array_equal(ssc_labels(w, labels), labels)

    def test_scale_invariant(self):
        rng = np.random.default_rng(3)
        w = random_affinity(rng, 10)
        labels = rng.integers(0, 3, size=10)
        base = ssc_labels(w, labels)
        assert np.array_equal(ssc_labels(4.0 * w, labels), base)
        assert np.array_equal(ssc_labels(0.25 * w, labels), base)

    def test_cross_class_dominated_rows_flip(self):
        w, labels = two_triangles()
        # tie nodes 0 and 3 strongly together across the class boundary:
        # each now carries more mass into the other triangle than its own
        w[0, 3] = w[3, 0] = 10.0
        predicted = ssc_labels(w, labels)
        assert predicted[0] == 1
        assert predicted[3] == 0
        keep = [1, 2, 4, 5]
        assert np.array_equal(predicted[keep], labels[keep])

    def test_isolated_node_gets_class_zero(self):
        w = np.zeros((3, 3))
        w[1, 2] = w[2, 1] = 1.0
        labels = np.array([2, 1, 1])
        predicted = ssc_labels(w, labels)
        assert predicted[0] == 0
        assert np.array_equal(isolated_nodes(w), [0])

    def test_ties_break_to_lower_class(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        w[0, 2] = w[2, 0] = 1.0
        labels = np.array([0, 2, 1])  # node 0 sees equal mass on classes 1 and 2
        assert ssc_labels(w, labels)[0] == 1


class TestAgreement:
    def test_identical(self):
        a = np.array([0, 1, 2, 1])
        assert agreement(a, a) == 1.0

    def test_complementary(self):
        a = np.array([0, 1, 0, 1])
        assert agreement(a, 1 - a) == 0.0

    def test_partial(self):
        assert agreement(np.array([0, 1, 1, 0]), np.array([0, 1, 0, 1])) == 0.5

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            agreement(np.array([0, 1]), np.array([0, 1, 2]))


class TestSpectralEmbedding:
    def test_two_block_indicators(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 3.0
        w[2, 3] = w[3, 2] = 2.0
        emb = spectral_embedding(w, k=2, mode="affinity")
        assert np.allclose(emb.eigenvalues, [3.0, 2.0], atol=1e-10)
        root = 1.0 / np.sqrt(2.0)
        assert np.allclose(emb.coordinates[:, 0], [root, root, 0.0, 0.0], atol=1e-8)
        assert np.allclose(emb.coordinates[:, 1], [0.0, 0.0, root, root], atol=1e-8)

    def test_eigen_residuals_within_tolerance(self):
        rng = np.random.default_rng(4)
        w = random_affinity(rng, 9)
        emb = spectral_embedding(w, k=3, mode="affinity")
        bound = 1e-6 * np.linalg.norm(w)
        for j in range(3):
            v = emb.coordinates[:, j]
            assert np.linalg.norm(w @ v - emb.eigenvalues[j] * v) <= bound
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-10)

    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(5)
        w = random_affinity(rng, 8)
        emb = spectral_embedding(w, k=8 - 1, mode="affinity")
        reference = np.sort(np.linalg.eigvalsh(w))[::-1][:7]
        assert np.allclose(emb.eigenvalues, reference, atol=1e-8)
        assert np.all(np.diff(emb.eigenvalues) <= 1e-12)  # sorted descending

    def test_laplacian_mode_smallest_eigenvalues(self):
        w, _ = two_triangles()
        emb = spectral_embedding(w, k=2, mode="normalized_laplacian")
        # two components give a double zero eigenvalue
        assert np.allclose(emb.eigenvalues, [0.0, 0.0], atol=1e-10)
        assert np.all(np.diff(emb.eigenvalues) >= -1e-12)  # sorted ascending

    def test_laplacian_rejects_isolated_nodes(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 1.0
        with pytest.raises(DegenerateDegreeError, match=r"\[2, 3\]"):
            spectral_embedding(w, k=1, mode="normalized_laplacian")

    def test_sign_convention(self):
        rng = np.random.default_rng(6)
        w = random_affinity(rng, 7)
        emb = spectral_embedding(w, k=4, mode="affinity")
        for j in range(4):
            col = emb.coordinates[:, j]
            nz = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
            assert col[nz[0]] > 0

    def test_k_out_of_range(self):
        w, _ = two_triangles()
        with pytest.raises(ValueError):
            spectral_embedding(w, k=6)
        with pytest.raises(ValueError):
            spectral_embedding(w, k=0)

    def test_unknown_mode(self):
        w, _ = two_triangles()
        with pytest.raises(ValueError):
            spectral_embedding(w, k=2, mode="laplacian")


class TestTopNeighbors:
    def test_distinct_values_descending(self):
        w = np.zeros((4, 4))
        w[0, 1:] = [0.5, 2.0, 1.0]
        w[1:, 0] = w[0, 1:]
        assert top_neighbors(w, 0, 3).tolist() == [2, 3, 1]

    def test_full_ranking(self):
        rng = np.random.default_rng(7)
        w = random_affinity(rng, 6)
        ranked = top_neighbors(w, 2, 5)
        assert sorted(ranked.tolist()) == [0, 1, 3, 4, 5]
        values = w[2][ranked]
        assert np.all(np.diff(values) <= 0)

    def test_ties_prefer_lower_index(self):
        w = np.zeros((5, 5))
        w[0, 1:] = [1.0, 2.0, 1.0, 2.0]
        w[1:, 0] = w[0, 1:]
        ranked = top_neighbors(w, 0, 4).tolist()
        reference = sorted(range(1, 5), key=lambda j: (-w[0, j], j))
        assert ranked == reference
        assert ranked == [2, 4, 1, 3]

    def test_k_bounds(self):
        w, _ = two_triangles()
        with pytest.raises(ValueError):
            top_neighbors(w, 0, 6)
        with pytest.raises(IndexError):
            top_neighbors(w, 9, 2)
