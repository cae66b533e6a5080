"""ML validation harness for simulated activity feature tables.

Loads the labelled feature CSV the simulator emits, splits it 80/10/10
by agent, trains a gradient-boosted decision-tree classifier, and
reports ROC/PR curves with scalar metrics on the held-out test rows.
"""

from .data import (
    DEFAULT_SENTINEL,
    DataError,
    Dataset,
    DatasetSplit,
    load_features,
    prevalence,
    shuffle_labels,
    split_dataset,
)
from .evaluate import EvalReport, EvaluationError, evaluate, write_report
from .model import (
    Hyperparameters,
    ModelError,
    feature_importance,
    train_classifier,
)

__all__ = [
    "DEFAULT_SENTINEL",
    "DataError",
    "Dataset",
    "DatasetSplit",
    "EvalReport",
    "EvaluationError",
    "Hyperparameters",
    "ModelError",
    "evaluate",
    "feature_importance",
    "load_features",
    "prevalence",
    "shuffle_labels",
    "split_dataset",
    "train_classifier",
    "write_report",
]

__version__ = "0.1.0"
