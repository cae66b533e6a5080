"""Shared builders: synthetic feature tables and the simulator baseline."""

import csv
import subprocess
import sys

import numpy as np
import pytest


def write_features_csv(path, feature_names, rows):
    """Write a feature table; rows are (token, values, label) triples."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["token", *feature_names, "label"])
        for token, values, label in rows:
            writer.writerow([token, *values, label])
    return str(path)


def gaussian_table(path, n_per_class=60, n_features=3, separation=4.0,
                   seed=0):
    """Two-class table where class 1 shifts the first feature."""
    rng = np.random.default_rng(seed)
    names = [f"f_{chr(ord('a') + j)}" for j in range(n_features)]
    rows = []
    for label in (0, 1):
        x = rng.normal(size=(n_per_class, n_features))
        x[:, 0] += separation * label
        for i in range(n_per_class):
            rows.append((f"C_{label}{i:07d}",
                         [repr(float(v)) for v in x[i]], label))
    return write_features_csv(path, names, rows)


@pytest.fixture(scope="session")
def baseline_features(tmp_path_factory):
    """Feature CSV for the packaged baseline, made via the simulator CLI.

    The harness touches the simulator only through this file.
    """
    pytest.importorskip("kmcsim", reason="simulator package not installed")
    from kmcsim.config import baseline_path

    out = tmp_path_factory.mktemp("baseline")
    log = out / "log.csv"
    features = out / "features.csv"
    subprocess.run(
        [sys.executable, "-m", "kmcsim.cli", "simulate",
         "--config", str(baseline_path()), "--out", str(log)],
        check=True, capture_output=True, text=True,
    )
    subprocess.run(
        [sys.executable, "-m", "kmcsim.cli", "features",
         "--log", str(log), "--config", str(baseline_path()),
         "--out", str(features)],
        check=True, capture_output=True, text=True,
    )
    return str(features)
