"""The reference classifier and its fixed hyperparameter set.

The hyperparameters carry the vocabulary of the XGBoost ecosystem
(booster, reg_lambda, tree_method and so on) because that is the lingua
franca for gradient-boosted trees; this environment provides
scikit-learn, whose HistGradientBoostingClassifier is the same
histogram-based GBDT algorithm as ``tree_method=hist``.  The mapping is
exact for every numerically consequential knob except two, noted
inline: XGBoost's hessian-mass ``min_child_weight`` has no count-based
counterpart, and the initial prediction is the class-prior log-odds
rather than a fixed 0.5 probability (identical for balanced labels).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from sklearn.ensemble import HistGradientBoostingClassifier
from sklearn.inspection import permutation_importance


class ModelError(ValueError):
    """Raised for untrainable inputs."""


@dataclass(frozen=True)
class Hyperparameters:
    """Training knobs, defaulted to the reference configuration."""

    base_score: float = 0.5
    booster: str = "gbtree"
    colsample_bylevel: float = 1.0
    colsample_bynode: float = 1.0
    colsample_bytree: float = 1.0
    gamma: float = 0.0
    learning_rate: float = 0.1
    max_delta_step: float = 0.0
    max_depth: int = 3
    min_child_weight: float = 1.0
    missing: None = None
    n_estimators: int = 100
    nthread: int = 1
    objective: str = "binary:logistic"
    reg_alpha: float = 0.0
    reg_lambda: float = 1.0
    scale_pos_weight: float = 1.0
    seed: int = 0
    subsample: float = 1.0
    verbosity: int = 1
    tree_method: str = "hist"

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        if self.booster != "gbtree":
            raise ModelError(f"unsupported booster: {self.booster}")
        if self.objective != "binary:logistic":
            raise ModelError(f"unsupported objective: {self.objective}")
        if self.tree_method != "hist":
            raise ModelError(f"unsupported tree_method: {self.tree_method}")
        for knob in ("colsample_bylevel", "colsample_bynode",
                     "colsample_bytree", "subsample"):
            if getattr(self, knob) != 1.0:
                raise ModelError(f"{knob} != 1 is not supported here")
        if self.reg_alpha != 0.0:
            raise ModelError("L1 leaf regularisation is not supported here")

    def to_estimator(self) -> HistGradientBoostingClassifier:
        self.validate()
        return HistGradientBoostingClassifier(
            loss="log_loss",
            learning_rate=self.learning_rate,
            max_iter=self.n_estimators,
            max_depth=self.max_depth,
            max_leaf_nodes=None,    # depth is the only structural limit
            l2_regularization=self.reg_lambda,
            # Hessian mass has no count counterpart; stay permissive and
            # let depth and the learning rate regularise.
            min_samples_leaf=max(1, round(self.min_child_weight)),
            early_stopping=False,
            random_state=self.seed,
            verbose=0 if self.verbosity <= 1 else 1,
        )


def train_classifier(x: np.ndarray, y: np.ndarray,
                     params: Hyperparameters | None = None
                     ) -> HistGradientBoostingClassifier:
    """Fit the reference classifier; inputs must be finite and 2-class."""
    params = params or Hyperparameters()
    if not np.isfinite(x).all():
        raise ModelError("non-finite feature values; impute before training")
    if set(np.unique(y)) != {0, 1}:
        raise ModelError("training labels must contain both classes")
    model = params.to_estimator()
    model.fit(x, y)
    return model


def feature_importance(model, x: np.ndarray, y: np.ndarray,
                       feature_names: list[str], *, seed: int = 0,
                       n_repeats: int = 5) -> list[tuple[str, float]]:
    """Permutation importances, most important first."""
    result = permutation_importance(model, x, y, n_repeats=n_repeats,
                                    random_state=seed)
    order = np.argsort(result.importances_mean)[::-1]
    return [(feature_names[i], float(result.importances_mean[i]))
            for i in order]
