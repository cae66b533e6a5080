"""Held-out evaluation: curves, scalar metrics, and report files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.metrics import (
    average_precision_score,
    precision_recall_curve,
    roc_auc_score,
    roc_curve,
)

from .data import prevalence


class EvaluationError(ValueError):
    """Raised when the held-out set cannot support the metrics."""


@dataclass(frozen=True)
class EvalReport:
    """Curves and scalars from one held-out evaluation."""

    auc_roc: float
    average_precision: float
    prevalence: float
    n_test: int
    fpr: np.ndarray
    tpr: np.ndarray
    roc_thresholds: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    pr_thresholds: np.ndarray
    threshold_table: list[dict]


def evaluate(model, x: np.ndarray, y: np.ndarray) -> EvalReport:
    """Score the held-out rows and compute ROC/PR curves."""
    classes = set(np.unique(y))
    if classes != {0, 1}:
        raise EvaluationError(
            f"evaluation needs both classes in the held-out set, got {classes}"
        )
    scores = model.predict_proba(x)[:, 1]
    fpr, tpr, roc_thr = roc_curve(y, scores)
    precision, recall, pr_thr = precision_recall_curve(y, scores)

    table = []
    for threshold in np.linspace(0.0, 1.0, 21):
        predicted = scores >= threshold
        tp = int(np.sum(predicted & (y == 1)))
        fp = int(np.sum(predicted & (y == 0)))
        fn = int(np.sum(~predicted & (y == 1)))
        tn = int(np.sum(~predicted & (y == 0)))
        table.append({
            "threshold": round(float(threshold), 2),
            "tp": tp, "fp": fp, "fn": fn, "tn": tn,
            "precision": tp / (tp + fp) if tp + fp else None,
            "recall": tp / (tp + fn) if tp + fn else None,
        })

    return EvalReport(
        auc_roc=float(roc_auc_score(y, scores)),
        average_precision=float(average_precision_score(y, scores)),
        prevalence=prevalence(y),
        n_test=int(y.size),
        fpr=fpr, tpr=tpr, roc_thresholds=roc_thr,
        precision=precision, recall=recall, pr_thresholds=pr_thr,
        threshold_table=table,
    )


def _write_curve(path: Path, header: list[str],
                 columns: list[np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_report(report: EvalReport, out_dir: str | Path,
                 extra: dict | None = None) -> dict[str, Path]:
    """Write report.json, curve CSVs and plot images; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out / "report.json",
        "roc_csv": out / "roc.csv",
        "pr_csv": out / "pr.csv",
        "roc_png": out / "roc.png",
        "pr_png": out / "pr.png",
    }

    payload = {
        "auc_roc": report.auc_roc,
        "average_precision": report.average_precision,
        "prevalence": report.prevalence,
        "n_test": report.n_test,
        "threshold_table": report.threshold_table,
    }
    if extra:
        payload.update(extra)
    paths["report"].write_text(json.dumps(payload, indent=2, sort_keys=True)
                               + "\n", encoding="utf-8")

    _write_curve(paths["roc_csv"], ["fpr", "tpr", "threshold"],
                 [report.fpr, report.tpr, report.roc_thresholds])
    # precision/recall have one more point than their thresholds; pad
    # with nan so the CSV stays rectangular.
    pr_thr = np.append(report.pr_thresholds, np.nan)
    _write_curve(paths["pr_csv"], ["precision", "recall", "threshold"],
                 [report.precision, report.recall, pr_thr])

    _plot(report, paths)
    return paths


def _plot(report: EvalReport, paths: dict[str, Path]) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(report.fpr, report.tpr,
            label=f"AUC = {report.auc_roc:.3f}")
    ax.plot([0, 1], [0, 1], "k--", linewidth=0.8, label="chance")
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title("ROC")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(paths["roc_png"], dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(report.recall, report.precision,
            label=f"AP = {report.average_precision:.3f}")
    ax.axhline(report.prevalence, color="k", linestyle="--", linewidth=0.8,
               label=f"prevalence = {report.prevalence:.2f}")
    ax.set_xlabel("recall")
    ax.set_ylabel("precision")
    ax.set_title("Precision-Recall")
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(paths["pr_png"], dpi=120)
    plt.close(fig)
