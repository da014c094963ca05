"""Embedding dataset containers.

An EmbeddingDataset is an immutable, validated collection of per-sample
embedding vectors with class and domain labels.  Records are kept sorted
by sample id and classes are indexed in lexicographic label order, so
every downstream computation sees one canonical ordering regardless of
how the input file was shuffled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .errors import EmptyClass, EmptyInput, InvalidDimension

ROLES = ("train", "test")


@dataclass(frozen=True)
class EmbeddingRecord:
    """One sample: opaque id, class label, optional domain label, vector."""

    sample_id: str
    class_label: str
    domain_label: str
    vector: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class EmbeddingDataset:
    role: str
    dimension: int
    records: tuple[EmbeddingRecord, ...]
    labels: tuple[str, ...]
    label_index: dict[str, int]
    values: np.ndarray = field(repr=False)       # (N, d) float64, record order
    class_indices: np.ndarray = field(repr=False)  # (N,) int64

    @property
    def class_count(self) -> int:
        return len(self.labels)

    def count_for(self, label: str) -> int:
        return int(np.sum(self.class_indices == self.label_index[label]))


def build_dataset(
    records: Iterable[EmbeddingRecord],
    role: str,
    labels: Sequence[str] | None = None,
) -> EmbeddingDataset:
    """Validate and canonicalize records into an EmbeddingDataset.

    Records are sorted by sample id (stable); the class index is the
    lexicographic order of the labels.  Passing an explicit ``labels``
    list declares the class set up front — a declared class with no
    records raises EmptyClass.
    """
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    recs = sorted(records, key=lambda r: r.sample_id)
    if not recs:
        raise EmptyInput("dataset has no records")
    dim = len(recs[0].vector)
    if dim < 1:
        raise InvalidDimension("embedding dimension must be >= 1")
    for r in recs:
        if len(r.vector) != dim:
            raise InvalidDimension(
                f"record {r.sample_id!r} has dimension {len(r.vector)}, expected {dim}"
            )
        for x in r.vector:
            if not math.isfinite(x):
                raise InvalidDimension(
                    f"record {r.sample_id!r} has a non-finite coordinate"
                )
    seen = {r.class_label for r in recs}
    if labels is None:
        ordered = tuple(sorted(seen))
    else:
        ordered = tuple(sorted(labels))
        missing = seen - set(ordered)
        if missing:
            raise EmptyClass(
                f"records carry labels outside the declared set: {sorted(missing)}"
            )
        empty = set(ordered) - seen
        if empty:
            raise EmptyClass(f"declared classes have no records: {sorted(empty)}")
    index = {lab: i for i, lab in enumerate(ordered)}
    values = np.array([r.vector for r in recs], dtype=np.float64)
    class_indices = np.array([index[r.class_label] for r in recs], dtype=np.int64)
    return EmbeddingDataset(
        role=role,
        dimension=dim,
        records=tuple(recs),
        labels=ordered,
        label_index=index,
        values=values,
        class_indices=class_indices,
    )


@dataclass(frozen=True, eq=False)
class ClassCentroids:
    dataset_role: str
    labels: tuple[str, ...]
    centroids: np.ndarray = field(repr=False)  # (C, d) float64
    counts: np.ndarray = field(repr=False)     # (C,) int64

    @property
    def dimension(self) -> int:
        return int(self.centroids.shape[1])


def compute_centroids(dataset: EmbeddingDataset) -> ClassCentroids:
    """Per-class arithmetic mean vectors, accumulated in record order."""
    centroids, counts = kernels.class_centroids(
        dataset.values, dataset.class_indices, dataset.class_count
    )
    if np.any(counts == 0):
        empty = [dataset.labels[i] for i in np.nonzero(counts == 0)[0]]
        raise EmptyClass(f"classes with zero records: {empty}")
    return ClassCentroids(
        dataset_role=dataset.role,
        labels=dataset.labels,
        centroids=centroids,
        counts=counts,
    )
