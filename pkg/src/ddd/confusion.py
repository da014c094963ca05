"""Normalized confusion matrices from classifier predictions.

Two input shapes are supported: hard labels (one predicted class per
sample) and probability vectors.  In hard mode, entry (a, b) is the
fraction of true-class-a samples predicted as b; in soft mode it is the
mean predicted probability of b over true-class-a samples.  Either way
each supported row sums to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyInput,
    EmptyIntersection,
    MixedModes,
    UnknownLabel,
)

PROB_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class PredictionRecord:
    """One classified sample: either a hard label or a probability map."""

    sample_id: str
    true_label: str
    hard_label: str | None = None
    probabilities: dict[str, float] | None = None

    def __post_init__(self):
        if (self.hard_label is None) == (self.probabilities is None):
            raise ValueError(
                "exactly one of hard_label / probabilities must be set"
            )

    @property
    def is_soft(self) -> bool:
        return self.probabilities is not None


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)   # (C, C) float64, rows = true class
    mode: str = "hard"                        # "hard" | "soft"
    support: np.ndarray = field(repr=False, default=None)  # (C,) int64

    @property
    def zero_support_labels(self) -> tuple[str, ...]:
        return tuple(
            lab for lab, n in zip(self.labels, self.support) if n == 0
        )


def _argmax_label(probabilities: dict[str, float], labels: tuple[str, ...]) -> str:
    best = None
    best_p = -1.0
    for lab in labels:
        p = probabilities.get(lab, 0.0)
        if p > best_p:
            best = lab
            best_p = p
    return best


def build_confusion(
    predictions: list[PredictionRecord],
    labels: tuple[str, ...] | list[str],
    mode: str = "auto",
) -> ConfusionMatrix:
    """Accumulate predictions into a row-normalized confusion matrix.

    mode="auto" picks soft iff every record carries probabilities and
    hard iff every record carries a hard label; a mix raises MixedModes.
    An explicit mode override converts the other kind (one-hot for
    hard->soft, argmax for soft->hard, ties to the earliest label).
    Records are accumulated in sample-id order so the result does not
    depend on input ordering.
    """
    if mode not in ("auto", "hard", "soft"):
        raise ValueError(f"mode must be auto|hard|soft, got {mode!r}")
    if not predictions:
        raise EmptyInput("no prediction records")
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}

    any_soft = any(r.is_soft for r in predictions)
    any_hard = any(not r.is_soft for r in predictions)
    if mode == "auto":
        if any_soft and any_hard:
            raise MixedModes(
                "records mix hard labels and probability vectors; "
                "pass mode='hard' or mode='soft' to resolve"
            )
        mode = "soft" if any_soft else "hard"

    records = sorted(predictions, key=lambda r: r.sample_id)
    for r in records:
        if r.true_label not in index:
            raise UnknownLabel(f"true label {r.true_label!r} not in label list")
        if r.is_soft:
            for lab in r.probabilities:
                if lab not in index:
                    raise UnknownLabel(
                        f"probability key {lab!r} not in label list"
                    )
        elif r.hard_label not in index:
            raise UnknownLabel(
                f"predicted label {r.hard_label!r} not in label list"
            )

    c = len(labels)
    acc = np.zeros((c, c), dtype=np.float64)
    support = np.zeros(c, dtype=np.int64)
    for r in records:
        a = index[r.true_label]
        support[a] += 1
        if mode == "hard":
            pred = r.hard_label if not r.is_soft else _argmax_label(
                r.probabilities, labels
            )
            acc[a, index[pred]] += 1.0
        else:
            if r.is_soft:
                for lab in labels:
                    acc[a, index[lab]] += r.probabilities.get(lab, 0.0)
            else:
                acc[a, index[r.hard_label]] += 1.0
    for a in range(c):
        if support[a] > 0:
            acc[a, :] /= float(support[a])
    return ConfusionMatrix(labels=labels, values=acc, mode=mode, support=support)


@dataclass(frozen=True, eq=False)
class PTilde:
    """Restriction of a confusion matrix to a common label set."""

    labels: tuple[str, ...]
    matrix: np.ndarray = field(repr=False)  # (C, C) raw restricted values
    flat: np.ndarray = field(repr=False)    # row-major C^2 vector

    def row(self, label: str) -> np.ndarray:
        return self.matrix[self.labels.index(label)]


def extract_p_tilde(
    confusion: ConfusionMatrix,
    train_labels: tuple[str, ...] | list[str],
    test_labels: tuple[str, ...] | list[str],
    renormalize: bool = False,
) -> PTilde:
    """Restrict P to labels shared by the similarity matrix and P itself.

    The restricted rows keep their raw proportions by default: mass that
    flowed to classes outside the block is informative and renormalizing
    would hide it.  Pass renormalize=True for sensitivity analysis.
    """
    common = sorted(
        set(train_labels) & set(test_labels) & set(confusion.labels)
    )
    if not common:
        raise EmptyIntersection(
            "no labels shared between the similarity matrix and the "
            "confusion matrix"
        )
    pos = [confusion.labels.index(lab) for lab in common]
    block = confusion.values[np.ix_(pos, pos)].copy()
    if renormalize:
        sums = block.sum(axis=1)
        nz = sums > 0
        block[nz] = block[nz] / sums[nz, None]
    return PTilde(labels=tuple(common), matrix=block, flat=block.reshape(-1))
