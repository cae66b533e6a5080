"""Feature-table loading and the agent-level dataset split.

The only interface to the simulator is its feature CSV: a ``token``
column, numeric feature columns, and a trailing 0/1 ``label`` column.
Empty fields are statistics that were undefined for an agent (too few
events); they are imputed with a sentinel before any model sees them,
since the tree learner needs finite values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SENTINEL = -1.0

# Fewer rows than this per class cannot be split 80/10/10 with at
# least one row of each class in each part.
MIN_ROWS_PER_CLASS = 10


class DataError(ValueError):
    """Raised for unusable feature tables or impossible splits."""


@dataclass(frozen=True)
class Dataset:
    """A loaded feature table, imputed and ready for training."""

    tokens: list[str]
    feature_names: list[str]
    x: np.ndarray           # (n_agents, n_features) float64, all finite
    y: np.ndarray           # (n_agents,) int 0/1


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint row indices covering the whole table, split by agent."""

    train: np.ndarray
    validation: np.ndarray
    test: np.ndarray
    seed: int


def load_features(path: str, sentinel: float = DEFAULT_SENTINEL) -> Dataset:
    """Read a feature CSV; impute empty fields with the sentinel."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if len(header) < 3 or header[0] != "token" or header[-1] != "label":
            raise DataError(
                f"{path}: expected 'token,<features...>,label' header"
            )
        feature_names = header[1:-1]

        tokens: list[str] = []
        rows: list[list[float]] = []
        labels: list[int] = []
        for n, fields in enumerate(reader, start=2):
            if len(fields) != len(header):
                raise DataError(
                    f"{path} row {n}: {len(fields)} fields, "
                    f"expected {len(header)}"
                )
            tokens.append(fields[0])
            if fields[-1] not in ("0", "1"):
                raise DataError(
                    f"{path} row {n}: label must be 0 or 1, "
                    f"got {fields[-1]!r}"
                )
            labels.append(int(fields[-1]))
            try:
                rows.append([sentinel if f == "" else float(f)
                             for f in fields[1:-1]])
            except ValueError as e:
                raise DataError(f"{path} row {n}: {e}") from None

    if not rows:
        raise DataError(f"{path}: no data rows")
    if len(set(tokens)) != len(tokens):
        raise DataError(f"{path}: duplicate tokens")

    x = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(x).all():
        raise DataError(f"{path}: non-finite feature values after imputation")
    return Dataset(tokens=tokens, feature_names=feature_names, x=x,
                   y=np.asarray(labels, dtype=np.int64))


def split_dataset(dataset: Dataset, seed: int = 0) -> DatasetSplit:
    """Stratified 80/10/10 split over agents, deterministic in the seed.

    Each class is shuffled and sliced separately, so class balance is
    preserved within rounding in every part.  One row is one agent, so
    splitting rows is splitting tokens; nothing from a test agent can
    reach training.
    """
    rng = np.random.default_rng(seed)
    parts: dict[str, list[np.ndarray]] = {"train": [], "val": [], "test": []}
    for cls in np.unique(dataset.y):
        idx = np.flatnonzero(dataset.y == cls)
        if idx.size < MIN_ROWS_PER_CLASS:
            raise DataError(
                f"class {cls} has {idx.size} rows; "
                f"need at least {MIN_ROWS_PER_CLASS} to split"
            )
        rng.shuffle(idx)
        n_test = round(idx.size * 0.1)
        n_val = round(idx.size * 0.1)
        parts["test"].append(idx[:n_test])
        parts["val"].append(idx[n_test:n_test + n_val])
        parts["train"].append(idx[n_test + n_val:])

    def cat(name: str) -> np.ndarray:
        return np.sort(np.concatenate(parts[name]))

    split = DatasetSplit(train=cat("train"), validation=cat("val"),
                         test=cat("test"), seed=seed)
    assert _covers_exactly(split, dataset.y.size)
    return split


def _covers_exactly(split: DatasetSplit, n: int) -> bool:
    merged = np.concatenate([split.train, split.validation, split.test])
    return merged.size == n and np.array_equal(np.sort(merged), np.arange(n))


def shuffle_labels(dataset: Dataset, seed: int) -> Dataset:
    """A no-signal control: the same table with labels permuted."""
    rng = np.random.default_rng(seed)
    return Dataset(tokens=dataset.tokens,
                   feature_names=dataset.feature_names,
                   x=dataset.x,
                   y=rng.permutation(dataset.y))


def prevalence(y: np.ndarray) -> float:
    return float(np.mean(y)) if y.size else math.nan
