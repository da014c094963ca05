import numpy as np
import pytest

from ddd import PredictionRecord, build_confusion, extract_p_tilde
from ddd.errors import (
    EmptyInput,
    EmptyIntersection,
    MixedModes,
    UnknownLabel,
)


def hard(sample_id, true, pred):
    return PredictionRecord(sample_id=sample_id, true_label=true, hard_label=pred)


def soft(sample_id, true, probs):
    return PredictionRecord(sample_id=sample_id, true_label=true, probabilities=probs)


def test_hard_counting():
    records = [hard("1", "a", "a"), hard("2", "a", "b"),
               hard("3", "b", "b"), hard("4", "b", "b")]
    P = build_confusion(records, ("a", "b"))
    assert P.mode == "hard"
    np.testing.assert_allclose(P.values, [[0.5, 0.5], [0.0, 1.0]])
    assert P.support.tolist() == [2, 2]


def test_soft_mean_of_distributions():
    records = [soft("1", "a", {"a": 0.9, "b": 0.1}),
               soft("2", "a", {"a": 0.7, "b": 0.3})]
    P = build_confusion(records, ("a", "b"))
    assert P.mode == "soft"
    np.testing.assert_allclose(P.values[0], [0.8, 0.2])
    assert P.support.tolist() == [2, 0]
    assert P.zero_support_labels == ("b",)


def test_perfect_classifier_is_identity():
    labels = ("a", "b", "c")
    records = [hard(str(i), lab, lab) for i, lab in enumerate(labels * 3)]
    P = build_confusion(records, labels)
    np.testing.assert_array_equal(P.values, np.eye(3))


def test_row_stochastic_for_supported_rows():
    rng = np.random.Generator(np.random.PCG64(7))
    labels = tuple("abcd")
    records = []
    for i in range(200):
        t = labels[rng.integers(0, 4)]
        p = rng.dirichlet(np.ones(4))
        records.append(soft(f"s{i:03d}", t, dict(zip(labels, p))))
    P = build_confusion(records, labels)
    for row, n in zip(P.values, P.support):
        if n > 0:
            assert abs(row.sum() - 1.0) < 1e-9
        else:
            assert (row == 0).all()
    assert P.support.sum() == 200


def test_mode_auto_mixed_raises():
    records = [hard("1", "a", "a"), soft("2", "a", {"a": 1.0})]
    with pytest.raises(MixedModes):
        build_confusion(records, ("a",))


def test_mode_override_resolves_mix():
    records = [hard("1", "a", "b"), soft("2", "a", {"a": 0.2, "b": 0.8})]
    P_hard = build_confusion(records, ("a", "b"), mode="hard")
    np.testing.assert_allclose(P_hard.values[0], [0.0, 1.0])
    P_soft = build_confusion(records, ("a", "b"), mode="soft")
    np.testing.assert_allclose(P_soft.values[0], [0.1, 0.9])


def test_hard_equals_soft_on_one_hot():
    labels = ("a", "b", "c")
    pairs = [("a", "a"), ("a", "c"), ("b", "b"), ("c", "a"), ("c", "c")]
    hards = [hard(str(i), t, p) for i, (t, p) in enumerate(pairs)]
    softs = [
        soft(str(i), t, {lab: 1.0 if lab == p else 0.0 for lab in labels})
        for i, (t, p) in enumerate(pairs)
    ]
    P1 = build_confusion(hards, labels)
    P2 = build_confusion(softs, labels)
    np.testing.assert_array_equal(P1.values, P2.values)


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        build_confusion([hard("1", "z", "a")], ("a", "b"))
    with pytest.raises(UnknownLabel):
        build_confusion([hard("1", "a", "z")], ("a", "b"))
    with pytest.raises(UnknownLabel):
        build_confusion([soft("1", "a", {"z": 1.0})], ("a", "b"))


def test_empty_input():
    with pytest.raises(EmptyInput):
        build_confusion([], ("a",))


def test_label_permutation_consistency():
    records = [hard("1", "a", "b"), hard("2", "b", "a"), hard("3", "a", "a")]
    P1 = build_confusion(records, ("a", "b"))
    P2 = build_confusion(records, ("b", "a"))
    np.testing.assert_array_equal(P1.values, P2.values[::-1, ::-1])


def test_order_independence():
    records = [hard("3", "a", "b"), hard("1", "a", "a"), hard("2", "b", "b")]
    P1 = build_confusion(records, ("a", "b"))
    P2 = build_confusion(list(reversed(records)), ("a", "b"))
    assert P1.values.tobytes() == P2.values.tobytes()


# ---------------------------------------------------------------------------
# extract_p_tilde


def test_p_tilde_full_overlap():
    records = [hard("1", "a", "a"), hard("2", "a", "b"),
               hard("3", "b", "b"), hard("4", "b", "a")]
    P = build_confusion(records, ("a", "b"))
    pt = extract_p_tilde(P, ("a", "b"), ("a", "b"))
    np.testing.assert_array_equal(pt.flat, P.values.reshape(-1))
    np.testing.assert_array_equal(pt.row("a"), P.values[0])


def test_p_tilde_submatrix_keeps_raw_values():
    labels = ("a", "b", "c")
    records = [hard("1", "a", "c"), hard("2", "a", "a"),
               hard("3", "b", "b"), hard("4", "c", "c")]
    P = build_confusion(records, labels)
    pt = extract_p_tilde(P, ("a", "b"), ("a", "b"))
    assert pt.labels == ("a", "b")
    # row a kept its raw proportions: half the mass went to c
    np.testing.assert_allclose(pt.matrix[0], [0.5, 0.0])
    pt_renorm = extract_p_tilde(P, ("a", "b"), ("a", "b"), renormalize=True)
    np.testing.assert_allclose(pt_renorm.matrix[0], [1.0, 0.0])


def test_p_tilde_disjoint_labels():
    P = build_confusion([hard("1", "a", "a")], ("a",))
    with pytest.raises(EmptyIntersection):
        extract_p_tilde(P, ("x", "y"), ("x", "y"))
