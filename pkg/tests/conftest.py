import numpy as np
import pytest

from ddd import EmbeddingRecord, build_dataset


def make_dataset(points_by_class, role="train", domain=""):
    """Build a dataset from {label: [vector, ...]}; ids are generated."""
    records = []
    for label in sorted(points_by_class):
        for k, vec in enumerate(points_by_class[label]):
            records.append(
                EmbeddingRecord(
                    sample_id=f"{role[:2]}-{label}-{k:04d}",
                    class_label=label,
                    domain_label=domain,
                    vector=tuple(float(x) for x in vec),
                )
            )
    return build_dataset(records, role)


def random_dataset(rng, class_count=3, dim=4, per_class=5, role="train", scale=1.0):
    points = {
        f"c{i}": rng.standard_normal((per_class, dim)) * scale
        for i in range(class_count)
    }
    return make_dataset(points, role=role)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240809))
