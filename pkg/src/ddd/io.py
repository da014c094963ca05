"""File formats for embeddings, predictions, matrices and reports.

Embeddings travel either as CSV (`id,class,domain,e0,...,e{d-1}`) or as
a compact binary container (magic ``DDD1``, little-endian u32 dimension
and record count, then per record three u16-length-prefixed UTF-8
strings and d float32 coordinates).  Matrices and reports are CSV or
JSON; CSV files carry ``# key=value`` metadata comment lines ahead of
the header so typed matrices survive a write/read cycle.

All floats are serialized with 17 significant digits, which round-trips
64-bit values exactly.  The binary embedding format stores float32, so
its round-trip is exact only for float32-representable coordinates.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .confusion import ConfusionMatrix, PredictionRecord
from .correlation import CorrelationReport
from .dataset import EmbeddingDataset, EmbeddingRecord, build_dataset
from .errors import (
    DuplicateSampleId,
    NegativeProbability,
    NonFiniteValue,
    ParseError,
    RaggedRow,
    RowSumOutOfTolerance,
)
from .metrics import DistanceMatrix, SimilarityMatrix

MAGIC = b"DDD1"


def fmt_float(x: float) -> str:
    """17 significant digits; exact round-trip for IEEE doubles."""
    return format(float(x), ".17g")


def _fmt_json_float(x: float) -> str:
    s = fmt_float(x)
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with .17g floats; insertion order preserved."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}{dump_json(str(k))}: {dump_json(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dump_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_json_float(float(obj))
    if isinstance(obj, str):
        import json as _json

        return _json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(obj, path) -> None:
    Path(path).write_text(dump_json(obj) + "\n", encoding="utf-8")


def read_json(path):
    import json as _json

    return _json.loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# embeddings


def write_embeddings(dataset: EmbeddingDataset, path, format: str = "csv") -> None:
    if format == "csv":
        _write_embeddings_csv(dataset, path)
    elif format == "binary":
        _write_embeddings_binary(dataset, path)
    else:
        raise ValueError(f"unknown embedding format {format!r}")


def _write_embeddings_csv(dataset: EmbeddingDataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["id", "class", "domain"] + [f"e{k}" for k in range(dataset.dimension)]
        )
        for rec in dataset.records:
            writer.writerow(
                [rec.sample_id, rec.class_label, rec.domain_label]
                + [fmt_float(x) for x in rec.vector]
            )


def _write_embeddings_binary(dataset: EmbeddingDataset, path) -> None:
    parts = [MAGIC, struct.pack("<II", dataset.dimension, len(dataset.records))]
    for rec in dataset.records:
        for text in (rec.sample_id, rec.class_label, rec.domain_label):
            raw = text.encode("utf-8")
            if len(raw) > 0xFFFF:
                raise ValueError(f"string field too long in record {rec.sample_id!r}")
            parts.append(struct.pack("<H", len(raw)))
            parts.append(raw)
        parts.append(
            np.asarray(rec.vector, dtype="<f4").tobytes()
        )
    Path(path).write_bytes(b"".join(parts))


def read_embeddings(path, role: str, format: str | None = None) -> EmbeddingDataset:
    """Load a dataset from CSV or binary; sniffs the format by default."""
    if format is None:
        with open(path, "rb") as fh:
            format = "binary" if fh.read(4) == MAGIC else "csv"
    if format == "csv":
        return _read_embeddings_csv(path, role)
    if format == "binary":
        return _read_embeddings_binary(path, role)
    raise ValueError(f"unknown embedding format {format!r}")


def _read_embeddings_csv(path, role: str) -> EmbeddingDataset:
    records = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header[:3] != ["id", "class", "domain"]:
            raise ParseError(
                f"{path}:1: header must start with id,class,domain"
            )
        dim = len(header) - 3
        if dim < 1:
            raise ParseError(f"{path}:1: no embedding columns")
        expected = [f"e{k}" for k in range(dim)]
        if header[3:] != expected:
            raise ParseError(
                f"{path}:1: embedding columns must be e0..e{dim - 1}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != dim + 3:
                raise RaggedRow(
                    f"{path}:{lineno}: expected {dim + 3} columns, got {len(row)}"
                )
            sample_id, class_label, domain_label = row[0], row[1], row[2]
            if sample_id in seen:
                raise DuplicateSampleId(f"{path}:{lineno}: duplicate id {sample_id!r}")
            seen.add(sample_id)
            coords = []
            for col, token in enumerate(row[3:]):
                try:
                    x = float(token)
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: bad float {token!r} in column e{col}"
                    ) from None
                if not math.isfinite(x):
                    raise NonFiniteValue(
                        f"{path}:{lineno}: non-finite value in column e{col}"
                    )
                coords.append(x)
            records.append(
                EmbeddingRecord(sample_id, class_label, domain_label, tuple(coords))
            )
    return build_dataset(records, role)


def _read_embeddings_binary(path, role: str) -> EmbeddingDataset:
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise ParseError(f"{path}: bad magic bytes")
    if len(blob) < 12:
        raise ParseError(f"{path}: truncated header")
    dim, count = struct.unpack_from("<II", blob, 4)
    offset = 12
    records = []
    seen: set[str] = set()

    def take_string(off: int) -> tuple[str, int]:
        if off + 2 > len(blob):
            raise ParseError(f"{path}: truncated at offset {off}")
        (n,) = struct.unpack_from("<H", blob, off)
        off += 2
        if off + n > len(blob):
            raise ParseError(f"{path}: truncated at offset {off}")
        return blob[off : off + n].decode("utf-8"), off + n

    for _ in range(count):
        sample_id, offset = take_string(offset)
        class_label, offset = take_string(offset)
        domain_label, offset = take_string(offset)
        end = offset + 4 * dim
        if end > len(blob):
            raise ParseError(f"{path}: truncated at offset {offset}")
        coords = np.frombuffer(blob, dtype="<f4", count=dim, offset=offset)
        offset = end
        if sample_id in seen:
            raise DuplicateSampleId(f"{path}: duplicate id {sample_id!r}")
        seen.add(sample_id)
        vector = tuple(float(x) for x in coords)
        for x in vector:
            if not math.isfinite(x):
                raise NonFiniteValue(
                    f"{path}: non-finite coordinate in record {sample_id!r}"
                )
        records.append(EmbeddingRecord(sample_id, class_label, domain_label, vector))
    if offset != len(blob):
        raise ParseError(f"{path}: {len(blob) - offset} trailing bytes")
    return build_dataset(records, role)


# ---------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class PredictionsFile:
    records: tuple[PredictionRecord, ...]
    labels: tuple[str, ...] | None  # probability column order (soft only)
    mode: str                       # "hard" | "soft"


def read_predictions(path) -> PredictionsFile:
    """Parse a predictions CSV (hard `id,true,pred` or soft `id,true,p_*`)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header == ["id", "true", "pred"]:
            mode = "hard"
            labels: tuple[str, ...] | None = None
        elif (
            len(header) > 2
            and header[:2] == ["id", "true"]
            and all(col.startswith("p_") for col in header[2:])
        ):
            mode = "soft"
            labels = tuple(col[2:] for col in header[2:])
        else:
            raise ParseError(
                f"{path}:1: header must be id,true,pred or id,true,p_<label>..."
            )
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise RaggedRow(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}"
                )
            if mode == "hard":
                records.append(
                    PredictionRecord(
                        sample_id=row[0], true_label=row[1], hard_label=row[2]
                    )
                )
                continue
            probs: dict[str, float] = {}
            total = 0.0
            for lab, token in zip(labels, row[2:]):
                try:
                    p = float(token)
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: bad probability {token!r}"
                    ) from None
                if not math.isfinite(p):
                    raise NonFiniteValue(
                        f"{path}:{lineno}: non-finite probability"
                    )
                if p < 0.0:
                    raise NegativeProbability(
                        f"{path}:{lineno}: negative probability {token}"
                    )
                probs[lab] = p
                total += p
            if abs(total - 1.0) > 1e-6:
                raise RowSumOutOfTolerance(
                    f"{path}:{lineno}: probabilities sum to {total!r}"
                )
            records.append(
                PredictionRecord(
                    sample_id=row[0], true_label=row[1], probabilities=probs
                )
            )
    return PredictionsFile(records=tuple(records), labels=labels, mode=mode)


def write_predictions(
    records, path, labels: tuple[str, ...] | None = None
) -> None:
    """Write prediction records; soft records need the label column order."""
    records = list(records)
    soft = any(r.is_soft for r in records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if soft:
            if labels is None:
                raise ValueError("soft predictions need an explicit label order")
            writer.writerow(["id", "true"] + [f"p_{lab}" for lab in labels])
            for r in records:
                probs = r.probabilities or {r.hard_label: 1.0}
                writer.writerow(
                    [r.sample_id, r.true_label]
                    + [fmt_float(probs.get(lab, 0.0)) for lab in labels]
                )
        else:
            writer.writerow(["id", "true", "pred"])
            for r in records:
                writer.writerow([r.sample_id, r.true_label, r.hard_label])


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True, eq=False)
class GenericMatrix:
    """Untyped labeled matrix, e.g. a hand-made CSV fed to the renderer."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)


def _matrix_parts(matrix):
    if isinstance(matrix, DistanceMatrix):
        return "distance", matrix.train_labels, matrix.test_labels, {}
    if isinstance(matrix, SimilarityMatrix):
        return (
            "similarity",
            matrix.train_labels,
            matrix.test_labels,
            {"alpha": fmt_float(matrix.alpha)},
        )
    if isinstance(matrix, ConfusionMatrix):
        return (
            "confusion",
            matrix.labels,
            matrix.labels,
            {
                "mode": matrix.mode,
                "support": " ".join(str(int(n)) for n in matrix.support),
            },
        )
    if isinstance(matrix, GenericMatrix):
        return "generic", matrix.row_labels, matrix.col_labels, {}
    raise TypeError(f"cannot serialize matrix of type {type(matrix)!r}")


def write_matrix(matrix, path, format: str = "csv") -> None:
    kind, row_labels, col_labels, meta = _matrix_parts(matrix)
    if format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# kind={kind}\n")
            for key, value in meta.items():
                fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([""] + list(col_labels))
            for lab, row in zip(row_labels, matrix.values):
                writer.writerow([lab] + [fmt_float(x) for x in row])
    elif format == "json":
        doc = {"kind": kind}
        if kind == "similarity":
            doc["alpha"] = matrix.alpha
        if kind == "confusion":
            doc["mode"] = matrix.mode
            doc["support"] = [int(n) for n in matrix.support]
        doc["row_labels"] = list(row_labels)
        doc["col_labels"] = list(col_labels)
        doc["values"] = [[float(x) for x in row] for row in matrix.values]
        write_json(doc, path)
    else:
        raise ValueError(f"unknown matrix format {format!r}")


def _assemble_matrix(kind, meta, row_labels, col_labels, values):
    if kind == "distance":
        return DistanceMatrix(
            train_labels=row_labels, test_labels=col_labels, values=values
        )
    if kind == "similarity":
        return SimilarityMatrix(
            alpha=float(meta.get("alpha", 1.0)),
            train_labels=row_labels,
            test_labels=col_labels,
            values=values,
        )
    if kind == "confusion":
        if list(row_labels) != list(col_labels):
            raise ParseError("confusion matrix must have equal row/col labels")
        if "support" in meta:
            if isinstance(meta["support"], str):
                support = np.array(
                    [int(tok) for tok in meta["support"].split()], dtype=np.int64
                )
            else:
                support = np.array(meta["support"], dtype=np.int64)
        else:
            support = np.ones(len(row_labels), dtype=np.int64)
        return ConfusionMatrix(
            labels=row_labels,
            values=values,
            mode=str(meta.get("mode", "hard")),
            support=support,
        )
    return GenericMatrix(row_labels=row_labels, col_labels=col_labels, values=values)


def read_matrix(path):
    """Load a matrix file; the return type follows its `kind` metadata."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = read_json(path)
        values = np.array(doc["values"], dtype=np.float64)
        if values.ndim != 2:
            raise ParseError(f"{path}: values must be a 2-d array")
        return _assemble_matrix(
            doc.get("kind", "generic"),
            doc,
            tuple(doc["row_labels"]),
            tuple(doc["col_labels"]),
            values,
        )
    meta: dict[str, str] = {}
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
        elif line.strip():
            data_lines.append(line)
    if not data_lines:
        raise ParseError(f"{path}: no matrix rows")
    rows = list(csv.reader(data_lines))
    col_labels = tuple(rows[0][1:])
    if not col_labels:
        raise ParseError(f"{path}: no matrix columns")
    row_labels = []
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(col_labels) + 1:
            raise RaggedRow(
                f"{path}:{lineno}: expected {len(col_labels) + 1} columns"
            )
        row_labels.append(row[0])
        try:
            values.append([float(tok) for tok in row[1:]])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad float") from None
    return _assemble_matrix(
        meta.get("kind", "generic"),
        meta,
        tuple(row_labels),
        tuple(col_labels),
        np.array(values, dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# correlation reports


def write_report(report: CorrelationReport, path, format: str = "json") -> None:
    if format == "json":
        doc = {
            "kind": "correlation_report",
            "alpha": report.alpha,
            "pairing": report.pairing,
            "aggregate_R": report.aggregate_R,
            "per_class": {lab: report.per_class[lab] for lab in sorted(report.per_class)},
            "excluded_classes": [
                {"label": lab, "reason": reason}
                for lab, reason in report.excluded_classes
            ],
        }
        write_json(doc, path)
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# kind=correlation_report\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["field", "label", "value"])
            writer.writerow(["alpha", "", fmt_float(report.alpha)])
            writer.writerow(["pairing", "", report.pairing])
            writer.writerow(["aggregate_R", "", fmt_float(report.aggregate_R)])
            for lab in sorted(report.per_class):
                writer.writerow(["per_class", lab, fmt_float(report.per_class[lab])])
            for lab, reason in report.excluded_classes:
                writer.writerow(["excluded", lab, reason])
    else:
        raise ValueError(f"unknown report format {format!r}")


def read_report(path) -> CorrelationReport:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = read_json(path)
        return CorrelationReport(
            aggregate_R=float(doc["aggregate_R"]),
            per_class={k: float(v) for k, v in doc["per_class"].items()},
            alpha=float(doc["alpha"]),
            pairing=str(doc["pairing"]),
            excluded_classes=tuple(
                (e["label"], e["reason"]) for e in doc["excluded_classes"]
            ),
        )
    alpha = None
    pairing = None
    aggregate = None
    per_class: dict[str, float] = {}
    excluded: list[tuple[str, str]] = []
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows or rows[0] != ["field", "label", "value"]:
        raise ParseError(f"{path}: expected field,label,value header")
    for row in rows[1:]:
        if len(row) != 3:
            raise RaggedRow(f"{path}: bad report row {row!r}")
        fieldname, label, value = row
        if fieldname == "alpha":
            alpha = float(value)
        elif fieldname == "pairing":
            pairing = value
        elif fieldname == "aggregate_R":
            aggregate = float(value)
        elif fieldname == "per_class":
            per_class[label] = float(value)
        elif fieldname == "excluded":
            excluded.append((label, value))
        else:
            raise ParseError(f"{path}: unknown report field {fieldname!r}")
    if alpha is None or pairing is None or aggregate is None:
        raise ParseError(f"{path}: incomplete report")
    return CorrelationReport(
        aggregate_R=aggregate,
        per_class=per_class,
        alpha=alpha,
        pairing=pairing,
        excluded_classes=tuple(excluded),
    )
