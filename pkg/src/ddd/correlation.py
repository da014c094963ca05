"""Correlation between diagnostic similarity and confusion behavior.

The aggregate statistic R is the cosine similarity between the flattened
restricted confusion matrix and the correspondingly ordered flattened
similarity matrix.  Two pairing conventions are supported because the
source method statement is ambiguous about index orientation:

  literal    S[i, j] is compared against P[i, j]
  transpose  S[i, j] is compared against P[j, i]

Transpose is the default: when the classifier often mistakes true class
a for class b, the train-b cluster sits close to the test-a centroid,
i.e. a large P[a, b] should co-occur with a large S[b, a].  The active
convention is recorded in every report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .confusion import ConfusionMatrix, extract_p_tilde
from .errors import EmptyIntersection, InvalidAlpha, ZeroVector
from .metrics import DistanceMatrix, SimilarityMatrix, compute_similarity

PAIRINGS = ("literal", "transpose")
DEFAULT_PAIRING = "transpose"
DEFAULT_ALPHA = 1.0

ALPHA_GRID_MIN = 1e-2
ALPHA_GRID_MAX = 1e2
ALPHA_GRID_POINTS = 40


def default_alpha_grid() -> tuple[float, ...]:
    """40 log-uniform points on [1e-2, 1e2], bracketing the useful range."""
    return tuple(
        float(a)
        for a in np.geomspace(ALPHA_GRID_MIN, ALPHA_GRID_MAX, ALPHA_GRID_POINTS)
    )


def cosine(u, v) -> float:
    """Cosine similarity (u.v)/(|u||v|), sequential accumulation.

    Raises ZeroVector when either input has zero norm — the value is
    undefined there, never silently 0.
    """
    un = [float(x) for x in u]
    vn = [float(x) for x in v]
    if len(un) != len(vn):
        raise ValueError(f"length mismatch: {len(un)} vs {len(vn)}")
    if not un:
        raise ValueError("cosine of empty vectors")
    dot = 0.0
    nu = 0.0
    nv = 0.0
    for a, b in zip(un, vn):
        dot += a * b
        nu += a * a
        nv += b * b
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    r = dot / (math.sqrt(nu) * math.sqrt(nv))
    # rounding can overshoot the mathematical bound by a few ulps
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationReport:
    aggregate_R: float
    per_class: dict[str, float]
    alpha: float
    pairing: str
    excluded_classes: tuple[tuple[str, str], ...]  # (label, reason)


def _validate_pairing(pairing: str) -> str:
    if pairing not in PAIRINGS:
        raise ValueError(f"pairing must be one of {PAIRINGS}, got {pairing!r}")
    return pairing


def correlate(
    similarity: SimilarityMatrix,
    confusion: ConfusionMatrix,
    pairing: str = DEFAULT_PAIRING,
    renormalize: bool = False,
) -> CorrelationReport:
    """Aggregate and per-class cosine correlation between S and P.

    Both matrices are restricted to the labels common to the similarity
    matrix's train set, its test set, and the confusion labels.  Classes
    with zero prediction support are dropped from the comparison and
    listed in the report; classes whose restricted vectors are zero are
    excluded from the per-class map only.
    """
    _validate_pairing(pairing)
    common = sorted(
        set(similarity.train_labels)
        & set(similarity.test_labels)
        & set(confusion.labels)
    )
    if not common:
        raise EmptyIntersection("no common labels between S and P")

    excluded: list[tuple[str, str]] = []
    supported = []
    for lab in common:
        if confusion.support[confusion.labels.index(lab)] == 0:
            excluded.append((lab, "zero support"))
        else:
            supported.append(lab)
    if not supported:
        raise EmptyIntersection("all common labels have zero support")

    p_tilde = extract_p_tilde(confusion, supported, supported, renormalize)
    rows = [similarity.train_labels.index(lab) for lab in supported]
    cols = [similarity.test_labels.index(lab) for lab in supported]
    s_block = similarity.values[np.ix_(rows, cols)]

    s_flat = s_block.T.reshape(-1) if pairing == "transpose" else s_block.reshape(-1)
    aggregate = cosine(p_tilde.flat, s_flat)

    per_class: dict[str, float] = {}
    for k, lab in enumerate(supported):
        s_vec = s_block[:, k] if pairing == "transpose" else s_block[k, :]
        p_vec = p_tilde.matrix[k, :]
        try:
            per_class[lab] = cosine(p_vec, s_vec)
        except ZeroVector:
            excluded.append((lab, "zero vector in restricted block"))
    return CorrelationReport(
        aggregate_R=aggregate,
        per_class=per_class,
        alpha=similarity.alpha,
        pairing=pairing,
        excluded_classes=tuple(excluded),
    )


@dataclass(frozen=True)
class SweepResult:
    points: tuple[tuple[float, CorrelationReport], ...]
    argmax_alpha: float
    argmax_report: CorrelationReport


def sweep_alpha(
    distances: DistanceMatrix,
    confusion: ConfusionMatrix,
    alphas=None,
    pairing: str = DEFAULT_PAIRING,
    renormalize: bool = False,
) -> SweepResult:
    """Correlation at every alpha on a grid, plus the argmax point.

    The grid must be strictly increasing and positive (default: the
    40-point log grid).  Ties in aggregate R break toward the smallest
    alpha.
    """
    _validate_pairing(pairing)
    grid = default_alpha_grid() if alphas is None else tuple(float(a) for a in alphas)
    if not grid:
        raise InvalidAlpha("alpha grid is empty")
    for a in grid:
        if not math.isfinite(a) or a <= 0.0:
            raise InvalidAlpha(f"grid alpha must be positive and finite, got {a!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidAlpha("alpha grid must be strictly increasing")

    points = []
    best_idx = 0
    best_r = -math.inf
    for i, a in enumerate(grid):
        report = correlate(
            compute_similarity(distances, a), confusion, pairing, renormalize
        )
        points.append((a, report))
        if report.aggregate_R > best_r:
            best_r = report.aggregate_R
            best_idx = i
    return SweepResult(
        points=tuple(points),
        argmax_alpha=grid[best_idx],
        argmax_report=points[best_idx][1],
    )
