"""Diagnostic distance and similarity matrices.

The distance matrix holds, for train class i and test class j, the mean
Euclidean distance from the train-class-i vectors to the test-class-j
centroid.  It is asymmetric by construction: swapping the datasets does
not transpose it.  The similarity matrix is the column-wise softmax of
-alpha * distances, a column-stochastic affinity of every train class
toward each test class.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .dataset import ClassCentroids, EmbeddingDataset
from .errors import DimensionMismatch, InvalidAlpha


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    train_labels: tuple[str, ...]
    test_labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)  # (C_train, C_test) float64


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    alpha: float
    train_labels: tuple[str, ...]
    test_labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)  # (C_train, C_test) float64


def compute_distance_matrix(
    train: EmbeddingDataset, test_centroids: ClassCentroids
) -> DistanceMatrix:
    """Mean distance from each train class's vectors to each test centroid."""
    if train.dimension != test_centroids.dimension:
        raise DimensionMismatch(
            f"train dimension {train.dimension} != centroid dimension "
            f"{test_centroids.dimension}"
        )
    values = kernels.mean_distances(
        train.values,
        train.class_indices,
        train.class_count,
        test_centroids.centroids,
    )
    return DistanceMatrix(
        train_labels=train.labels,
        test_labels=test_centroids.labels,
        values=values,
    )


def compute_similarity(distances: DistanceMatrix, alpha: float) -> SimilarityMatrix:
    """Column-wise temperature softmax of the negated distances.

    Each column j is exp(-alpha * L[:, j]) normalized to sum to 1; the
    implementation subtracts the column minimum before exponentiation so
    large alpha cannot overflow.  A single train class makes every entry
    exactly 1 by normalization, which carries no information — allowed,
    but flagged with a warning.
    """
    a = float(alpha)
    if not math.isfinite(a) or a <= 0.0:
        raise InvalidAlpha(f"alpha must be positive and finite, got {alpha!r}")
    if len(distances.train_labels) == 1:
        warnings.warn(
            "similarity over a single train class is constant 1.0",
            stacklevel=2,
        )
    values = kernels.softmax_columns(distances.values, a)
    return SimilarityMatrix(
        alpha=a,
        train_labels=distances.train_labels,
        test_labels=distances.test_labels,
        values=values,
    )


def similarity_from_datasets(
    train: EmbeddingDataset, test: EmbeddingDataset, alpha: float
) -> tuple[DistanceMatrix, SimilarityMatrix]:
    """Full pipeline: test centroids -> distance matrix -> similarity."""
    from .dataset import compute_centroids

    cents = compute_centroids(test)
    dist = compute_distance_matrix(train, cents)
    return dist, compute_similarity(dist, alpha)


def column_sums(matrix: np.ndarray) -> np.ndarray:
    return np.sum(matrix, axis=0)
