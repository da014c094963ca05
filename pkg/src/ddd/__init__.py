"""Discriminative difficulty distance between embedding datasets.

Pipeline: per-class centroids of the test set -> mean-distance matrix L
from every train class to every test centroid -> column-wise temperature
softmax S -> cosine correlation of S against the classifier's confusion
matrix P.  A high correlation means embedding-space geometry predicts
which classes the classifier will confuse.
"""

from ._backend import backend_name
from .confusion import (
    ConfusionMatrix,
    PredictionRecord,
    PTilde,
    build_confusion,
    extract_p_tilde,
)
from .correlation import (
    DEFAULT_ALPHA,
    DEFAULT_PAIRING,
    PAIRINGS,
    CorrelationReport,
    SweepResult,
    correlate,
    cosine,
    default_alpha_grid,
    sweep_alpha,
)
from .dataset import (
    ClassCentroids,
    EmbeddingDataset,
    EmbeddingRecord,
    build_dataset,
    compute_centroids,
)
from .metrics import (
    DistanceMatrix,
    SimilarityMatrix,
    compute_distance_matrix,
    compute_similarity,
    similarity_from_datasets,
)
from .synthbench import (
    EncoderSpec,
    GroundTruthCenters,
    SynthConfig,
    apply_encoder_distortion,
    generate,
    nearest_centroid_classify,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "build_confusion",
    "build_dataset",
    "compute_centroids",
    "compute_distance_matrix",
    "compute_similarity",
    "correlate",
    "cosine",
    "default_alpha_grid",
    "extract_p_tilde",
    "generate",
    "apply_encoder_distortion",
    "nearest_centroid_classify",
    "run_experiment",
    "similarity_from_datasets",
    "sweep_alpha",
    "ClassCentroids",
    "ConfusionMatrix",
    "CorrelationReport",
    "DistanceMatrix",
    "EmbeddingDataset",
    "EmbeddingRecord",
    "EncoderSpec",
    "GroundTruthCenters",
    "PredictionRecord",
    "PTilde",
    "SimilarityMatrix",
    "SweepResult",
    "SynthConfig",
    "DEFAULT_ALPHA",
    "DEFAULT_PAIRING",
    "PAIRINGS",
]
