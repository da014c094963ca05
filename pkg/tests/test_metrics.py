import math

import numpy as np
import pytest

from ddd import (
    DistanceMatrix,
    compute_centroids,
    compute_distance_matrix,
    compute_similarity,
    similarity_from_datasets,
)
from ddd.errors import DimensionMismatch, InvalidAlpha

from conftest import make_dataset, random_dataset


def dist(train_points, test_points):
    train = make_dataset(train_points, role="train")
    test = make_dataset(test_points, role="test")
    return compute_distance_matrix(train, compute_centroids(test))


def raw(values, train_labels=None, test_labels=None):
    values = np.asarray(values, dtype=np.float64)
    r, c = values.shape
    return DistanceMatrix(
        train_labels=tuple(train_labels or [f"t{i}" for i in range(r)]),
        test_labels=tuple(test_labels or [f"s{j}" for j in range(c)]),
        values=values,
    )


# ---------------------------------------------------------------------------
# distance examples


def test_distance_symmetric_pair():
    L = dist({"i": [(0.0, 0.0), (2.0, 0.0)]}, {"j": [(1.0, 0.0)]})
    assert L.values[0, 0] == 1.0


def test_distance_coincident_point():
    L = dist({"i": [(1.0, 0.0)]}, {"j": [(1.0, 0.0)]})
    assert L.values[0, 0] == 0.0


def test_distance_hand_oracle():
    # distances 3 and 5 from the two train points to centroid (3, 0)
    L = dist({"i": [(0.0, 0.0), (0.0, 4.0)]}, {"j": [(3.0, 0.0)]})
    assert L.values[0, 0] == pytest.approx(4.0, abs=1e-12)


def test_distance_brute_force_oracle(rng):
    train = random_dataset(rng, class_count=4, dim=5, per_class=7, role="train")
    test = random_dataset(rng, class_count=3, dim=5, per_class=6, role="test")
    cents = compute_centroids(test)
    L = compute_distance_matrix(train, cents)
    for i, ilab in enumerate(train.labels):
        for j in range(len(test.labels)):
            members = [
                r.vector for r in train.records if r.class_label == ilab
            ]
            expected = sum(
                math.dist(v, tuple(cents.centroids[j])) for v in members
            ) / len(members)
            assert L.values[i, j] == pytest.approx(expected, abs=1e-12)


def test_distance_dimension_mismatch():
    train = make_dataset({"i": [(0.0, 0.0)]}, role="train")
    test = make_dataset({"j": [(1.0, 0.0, 0.0)]}, role="test")
    with pytest.raises(DimensionMismatch):
        compute_distance_matrix(train, compute_centroids(test))


def test_distance_asymmetry_witness():
    spread = {"a": [(0.0, 0.0), (2.0, 0.0)]}
    tight = {"a": [(1.0, 0.0)]}
    forward = dist(spread, tight)
    backward = dist(tight, spread)
    assert forward.values[0, 0] == 1.0
    assert backward.values[0, 0] == 0.0
    assert forward.values[0, 0] != backward.values.T[0, 0]


# ---------------------------------------------------------------------------
# similarity examples


def test_similarity_two_by_two():
    S = compute_similarity(raw([[0.0, 1.0], [1.0, 0.0]]), 1.0)
    hi = 1.0 / (1.0 + math.exp(-1.0))
    expected = [[hi, 1.0 - hi], [1.0 - hi, hi]]
    np.testing.assert_allclose(S.values, expected, atol=1e-12)
    np.testing.assert_allclose(S.values, [[0.7311, 0.2689], [0.2689, 0.7311]],
                               atol=1e-4)


def test_similarity_uniform_limit(rng):
    L = raw(rng.uniform(0, 10, size=(5, 3)))
    S = compute_similarity(L, 1e-12)
    np.testing.assert_allclose(S.values, 1.0 / 5.0, atol=1e-6)


def test_similarity_concentration_limit():
    S = compute_similarity(raw([[0.0, 5.0], [10.0, 0.0]]), 100.0)
    np.testing.assert_allclose(S.values, [[1.0, 0.0], [0.0, 1.0]], atol=1e-9)


def test_similarity_invalid_alpha():
    L = raw([[0.0], [1.0]])
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(InvalidAlpha):
            compute_similarity(L, bad)


def test_similarity_single_train_class_warns():
    L = raw([[3.0, 7.0]])
    with pytest.warns(UserWarning):
        S = compute_similarity(L, 1.0)
    assert (S.values == 1.0).all()


# ---------------------------------------------------------------------------
# invariants


def test_column_stochastic(rng):
    for _ in range(20):
        L = raw(rng.uniform(0, 20, size=(6, 4)))
        S = compute_similarity(L, float(rng.uniform(0.01, 20)))
        np.testing.assert_allclose(S.values.sum(axis=0), 1.0, atol=1e-9)
        assert (S.values >= 0).all() and (S.values <= 1).all()


def test_order_preservation(rng):
    L = raw(rng.uniform(0, 5, size=(5, 4)))
    S = compute_similarity(L, 2.0)
    for j in range(4):
        for i in range(5):
            for k in range(5):
                if L.values[i, j] < L.values[k, j]:
                    assert S.values[i, j] > S.values[k, j]


def test_monotone_concentration(rng):
    L = raw(rng.uniform(0, 5, size=(5, 3)))
    argmins = L.values.argmin(axis=0)
    prev = None
    for alpha in (0.1, 0.5, 1.0, 2.0, 5.0, 20.0):
        S = compute_similarity(L, alpha)
        peak = np.array([S.values[argmins[j], j] for j in range(3)])
        if prev is not None:
            assert (peak >= prev - 1e-12).all()
        prev = peak


def test_shift_invariance(rng):
    L = rng.uniform(0, 5, size=(4, 3))
    shifted = L.copy()
    shifted[:, 1] += 2.75
    S0 = compute_similarity(raw(L), 1.3)
    S1 = compute_similarity(raw(shifted), 1.3)
    np.testing.assert_allclose(S0.values[:, 1], S1.values[:, 1], atol=1e-9)


def test_scale_equivariance(rng):
    L = rng.uniform(0, 5, size=(4, 3))
    beta = 2.5
    S_scaled = compute_similarity(raw(L * beta), 0.8)
    S_alpha = compute_similarity(raw(L), 0.8 * beta)
    np.testing.assert_allclose(S_scaled.values, S_alpha.values, atol=1e-9)


def test_permutation_equivariance(rng):
    L = rng.uniform(0, 5, size=(4, 3))
    perm = np.array([2, 0, 3, 1])
    S = compute_similarity(raw(L), 1.0)
    S_perm = compute_similarity(raw(L[perm]), 1.0)
    # column totals accumulate in a different order, so allow rounding slack
    np.testing.assert_allclose(S.values[perm], S_perm.values, atol=1e-12)


def test_determinism_bit_identical(rng):
    train = random_dataset(rng, role="train")
    test = random_dataset(rng, role="test")
    L1, S1 = similarity_from_datasets(train, test, 1.7)
    L2, S2 = similarity_from_datasets(train, test, 1.7)
    assert L1.values.tobytes() == L2.values.tobytes()
    assert S1.values.tobytes() == S2.values.tobytes()
