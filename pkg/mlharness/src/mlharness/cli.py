"""Command-line interface.

One subcommand: ``run`` loads a labelled feature table, splits it
80/10/10 by agent, trains the gradient-boosted classifier, evaluates it
on the held-out test rows, and writes ``report.json``, ``roc.csv``,
``pr.csv`` and the two curve images into the output directory.

Exit codes: 0 success, 1 invalid content (malformed feature rows,
degenerate classes), 2 I/O failure (unreadable or unwritable paths).
"""

from __future__ import annotations

import argparse
import sys

from .data import DataError, load_features, shuffle_labels, split_dataset
from .evaluate import EvaluationError, evaluate, write_report
from .model import (
    Hyperparameters,
    ModelError,
    feature_importance,
    train_classifier,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_run(args: argparse.Namespace) -> int:
    try:
        dataset = load_features(args.features, sentinel=args.sentinel)
    except OSError as e:
        return _fail(f"cannot read features: {e}", EXIT_IO)
    except DataError as e:
        return _fail(str(e), EXIT_INVALID)

    if args.shuffle_labels:
        dataset = shuffle_labels(dataset, seed=args.split_seed)

    params = Hyperparameters()
    try:
        split = split_dataset(dataset, seed=args.split_seed)
        model = train_classifier(dataset.x[split.train],
                                 dataset.y[split.train], params)
        x_test = dataset.x[split.test]
        y_test = dataset.y[split.test]
        report = evaluate(model, x_test, y_test)
    except (DataError, ModelError, EvaluationError) as e:
        return _fail(str(e), EXIT_INVALID)

    importances = feature_importance(model, x_test, y_test,
                                     dataset.feature_names,
                                     seed=params.seed)
    extra = {
        "split_seed": split.seed,
        "sentinel": args.sentinel,
        "labels_shuffled": args.shuffle_labels,
        "split_sizes": {
            "train": split.train.size,
            "validation": split.validation.size,
            "test": split.test.size,
        },
        "hyperparameters": params.to_dict(),
        "feature_importance": [[name, value] for name, value in importances],
        "test_tokens": [dataset.tokens[i] for i in split.test],
    }
    try:
        paths = write_report(report, args.out_dir, extra=extra)
    except OSError as e:
        return _fail(f"cannot write report: {e}", EXIT_IO)

    print(f"test AUC-ROC {report.auc_roc:.4f}, "
          f"average precision {report.average_precision:.4f} "
          f"({report.n_test} test rows, prevalence {report.prevalence:.2f})")
    print(f"wrote report to {paths['report']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlharness",
        description="Train and evaluate a bad-actor classifier on a "
                    "simulated activity feature table.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="train, evaluate, write the report")
    p_run.add_argument("--features", required=True,
                       help="labelled feature CSV path")
    p_run.add_argument("--out-dir", required=True,
                       help="directory for report.json, curves and plots")
    p_run.add_argument("--split-seed", type=int, default=0,
                       help="seed for the 80/10/10 split (default 0)")
    p_run.add_argument("--sentinel", type=float, default=-1.0,
                       help="fill value for empty feature fields "
                            "(default -1)")
    p_run.add_argument("--shuffle-labels", action="store_true",
                       help="destroy the label signal before splitting "
                            "(no-signal control)")
    p_run.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
