"""Command-line front end.

Subcommands: similarity, correlate, sweep, render, synth.  Every value
flag can be preset through an environment variable with the ``DDD_``
prefix (``DDD_ALPHA``, ``DDD_PAIRING``, ``DDD_FORMAT``, ...); an
explicit flag wins over the environment.

Exit codes: 0 success, 1 runtime or data error, 2 usage or validation
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .confusion import ConfusionMatrix, build_confusion
from .correlation import (
    DEFAULT_PAIRING,
    PAIRINGS,
    correlate,
    sweep_alpha,
)
from .dataset import compute_centroids
from .errors import DDDError, InvalidAlpha, InvalidConfig
from .io import (
    GenericMatrix,
    fmt_float,
    read_embeddings,
    read_matrix,
    read_predictions,
    write_embeddings,
    write_json,
    write_matrix,
    write_predictions,
    write_report,
)
from .metrics import DistanceMatrix, SimilarityMatrix, compute_distance_matrix, compute_similarity
from .render import render_heatmap
from .synthbench import (
    DEFAULT_EXPERIMENT_CONFIG,
    nearest_centroid_classify,
    parse_experiment_config,
    run_experiment,
)

USAGE_EXIT = 2
RUNTIME_EXIT = 1


def _env(name: str) -> str | None:
    return os.environ.get("DDD_" + name.lstrip("-").replace("-", "_").upper())


def _add(parser: argparse.ArgumentParser, flag: str, required: bool = False, **kw):
    """add_argument with a DDD_* environment default."""
    env = _env(flag)
    if env is not None:
        kw["default"] = env
        required = False
    parser.add_argument(flag, required=required, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddd",
        description=(
            "Discriminative difficulty distance between embedding datasets, "
            "validated against classifier confusion behavior."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "similarity",
        help="compute the diagnostic distance and similarity matrices",
    )
    _add(p, "--train", required=True, help="train embeddings (csv or binary)")
    _add(p, "--test", required=True, help="test embeddings (csv or binary)")
    _add(p, "--alpha", type=float, default="1.0", help="softmax temperature")
    _add(p, "--out", required=True, help="output directory")
    _add(p, "--format", default="csv", help="csv or json")

    p = sub.add_parser(
        "correlate",
        help="correlate a similarity matrix with classifier predictions",
    )
    _add(p, "--similarity", required=True, help="similarity matrix file")
    _add(p, "--predictions", required=True, help="predictions csv")
    _add(p, "--pairing", default=DEFAULT_PAIRING, help="literal or transpose")
    _add(p, "--out", required=True, help="report output path")
    _add(p, "--format", default="json", help="json or csv")
    p.add_argument(
        "--renormalize-p",
        action="store_true",
        help="renormalize confusion rows after label restriction",
    )

    p = sub.add_parser("sweep", help="correlation across an alpha grid")
    _add(p, "--train", required=True)
    _add(p, "--test", required=True)
    _add(p, "--predictions", required=True)
    _add(p, "--alpha-min", type=float, default="0.01")
    _add(p, "--alpha-max", type=float, default="100.0")
    _add(p, "--alpha-steps", type=int, default="40")
    _add(p, "--pairing", default=DEFAULT_PAIRING)
    _add(p, "--out", required=True, help="curve output path")
    _add(p, "--format", default="csv", help="csv or json")

    p = sub.add_parser("render", help="render a matrix file as an SVG heatmap")
    _add(p, "--matrix", required=True, help="matrix file (csv or json)")
    _add(p, "--out", required=True, help="output .svg path")

    p = sub.add_parser("synth", help="run the synthetic end-to-end benchmark")
    _add(p, "--config", default=None, help="experiment config json (bundled default if omitted)")
    _add(p, "--out", required=True, help="output directory")
    _add(p, "--format", default="csv", help="dataset format: csv or binary")

    return parser


def _check_choice(value: str, allowed, flag: str) -> str:
    if value not in allowed:
        raise InvalidConfig(f"{flag} must be one of {'/'.join(allowed)}, got {value!r}")
    return value


def _as_similarity(matrix) -> SimilarityMatrix:
    if isinstance(matrix, SimilarityMatrix):
        return matrix
    if isinstance(matrix, GenericMatrix):
        print(
            "note: matrix file carries no kind metadata; treating as a "
            "similarity matrix at alpha=1",
            file=sys.stderr,
        )
        return SimilarityMatrix(
            alpha=1.0,
            train_labels=matrix.row_labels,
            test_labels=matrix.col_labels,
            values=matrix.values,
        )
    raise DDDError(
        f"expected a similarity matrix, got kind "
        f"{type(matrix).__name__}"
    )


def _confusion_from_file(path) -> ConfusionMatrix:
    pred_file = read_predictions(path)
    if pred_file.mode == "soft":
        labels = pred_file.labels
    else:
        labels = tuple(
            sorted(
                {r.true_label for r in pred_file.records}
                | {r.hard_label for r in pred_file.records}
            )
        )
    return build_confusion(list(pred_file.records), labels)


def _matrix_labels(matrix):
    if isinstance(matrix, (DistanceMatrix, SimilarityMatrix)):
        return matrix.train_labels, matrix.test_labels, matrix.values
    if isinstance(matrix, ConfusionMatrix):
        return matrix.labels, matrix.labels, matrix.values
    return matrix.row_labels, matrix.col_labels, matrix.values


def cmd_similarity(args) -> int:
    fmt = _check_choice(args.format, ("csv", "json"), "--format")
    alpha = float(args.alpha)
    if not (alpha > 0) or not np.isfinite(alpha):
        raise InvalidAlpha(f"--alpha must be positive and finite, got {args.alpha}")
    train = read_embeddings(args.train, "train")
    test = read_embeddings(args.test, "test")
    dist = compute_distance_matrix(train, compute_centroids(test))
    sim = compute_similarity(dist, alpha)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(dist, out / f"distance.{fmt}", fmt)
    write_matrix(sim, out / f"similarity.{fmt}", fmt)
    print(f"wrote {out / f'distance.{fmt}'} and {out / f'similarity.{fmt}'}")
    return 0


def cmd_correlate(args) -> int:
    pairing = _check_choice(args.pairing, PAIRINGS, "--pairing")
    fmt = _check_choice(args.format, ("json", "csv"), "--format")
    sim = _as_similarity(read_matrix(args.similarity))
    confusion = _confusion_from_file(args.predictions)
    report = correlate(sim, confusion, pairing, renormalize=args.renormalize_p)
    write_report(report, args.out, fmt)
    print(f"aggregate_R={fmt_float(report.aggregate_R)} pairing={report.pairing}")
    return 0


def cmd_sweep(args) -> int:
    pairing = _check_choice(args.pairing, PAIRINGS, "--pairing")
    fmt = _check_choice(args.format, ("csv", "json"), "--format")
    lo = float(args.alpha_min)
    hi = float(args.alpha_max)
    steps = int(args.alpha_steps)
    if not (0 < lo) or not np.isfinite(lo) or not np.isfinite(hi):
        raise InvalidAlpha("alpha bounds must be positive and finite")
    if lo > hi:
        raise InvalidAlpha(f"--alpha-min {lo} exceeds --alpha-max {hi}")
    if steps < 1:
        raise InvalidAlpha("--alpha-steps must be >= 1")
    if steps == 1 and lo != hi:
        raise InvalidAlpha("--alpha-steps 1 needs --alpha-min == --alpha-max")
    grid = (lo,) if steps == 1 else tuple(float(a) for a in np.geomspace(lo, hi, steps))

    train = read_embeddings(args.train, "train")
    test = read_embeddings(args.test, "test")
    dist = compute_distance_matrix(train, compute_centroids(test))
    confusion = _confusion_from_file(args.predictions)
    result = sweep_alpha(dist, confusion, grid, pairing)

    if fmt == "csv":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("alpha,aggregate_R\n")
            for a, report in result.points:
                fh.write(f"{fmt_float(a)},{fmt_float(report.aggregate_R)}\n")
    else:
        write_json(
            {
                "pairing": pairing,
                "points": [
                    {
                        "alpha": a,
                        "aggregate_R": report.aggregate_R,
                        "per_class": {
                            lab: report.per_class[lab]
                            for lab in sorted(report.per_class)
                        },
                    }
                    for a, report in result.points
                ],
                "argmax": {
                    "alpha": result.argmax_alpha,
                    "aggregate_R": result.argmax_report.aggregate_R,
                },
            },
            args.out,
        )
    print(
        f"argmax: alpha={fmt_float(result.argmax_alpha)} "
        f"aggregate_R={fmt_float(result.argmax_report.aggregate_R)}"
    )
    return 0


def cmd_render(args) -> int:
    rows, cols, values = _matrix_labels(read_matrix(args.matrix))
    svg = render_heatmap(rows, cols, values)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_synth(args) -> int:
    fmt = _check_choice(args.format, ("csv", "binary"), "--format")
    if args.config is None:
        doc = DEFAULT_EXPERIMENT_CONFIG
    else:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{args.config}: invalid JSON ({exc})") from exc
    cfg, encoders, grid = parse_experiment_config(doc)

    report = run_experiment(cfg, encoders, grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    from .synthbench import generate

    train, test, _ = generate(cfg)
    ext = "csv" if fmt == "csv" else "bin"
    write_embeddings(train, out / f"train.{ext}", fmt)
    write_embeddings(test, out / f"test.{ext}", fmt)
    predictions = nearest_centroid_classify(train, test)
    write_predictions(predictions, out / "predictions.csv")
    write_json(report, out / "experiment.json")

    print(f"classifier accuracy: {fmt_float(report['classifier']['accuracy'])}")
    for name in report["ranking"]:
        entry = next(e for e in report["encoders"] if e["encoder"] == name)
        best = entry["best"][report["pairing_ranked_by"]]
        tag = " (shared space)" if entry["shared_space"] else ""
        print(
            f"  {name}{tag}: best R={fmt_float(best['r'])} "
            f"at alpha={fmt_float(best['alpha'])}"
        )
    return 0


COMMANDS = {
    "similarity": cmd_similarity,
    "correlate": cmd_correlate,
    "sweep": cmd_sweep,
    "render": cmd_render,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidAlpha, InvalidConfig) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (DDDError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
