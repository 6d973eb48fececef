"""Classifier zoo behind one uniform interface.

Seven model kinds share the same surface: train via :func:`train_model`,
rank via :func:`decision_scores`, classify via :func:`predict_labels`.
Scores mean different things per family (raw margin for linear models,
log-posterior difference for naive Bayes, positive-class probability for
trees, forests, and kNN), but "higher means more positive" holds for all,
which is what the threshold metrics and ranking curves need.

A score exactly at the decision threshold predicts negative (0).
"""

from __future__ import annotations

import numpy as np

from banglasent.features import FeatureMatrix, SparseVector
from banglasent.models.knn import METRICS, KNNModel, fit_knn, knn_predict, knn_scores
from banglasent.models.linear import (
    LOSSES,
    LinearModel,
    ModelError,
    TrainConfig,
    linear_scores,
    mean_hinge_loss,
    mean_logistic_loss,
    predict_proba,
    train_linear_svm,
    train_logreg,
    train_sgd,
)
from banglasent.models.naive_bayes import NBModel, nb_score, nb_scores, train_mnb
from banglasent.models.persist import (
    FORMAT_NAME,
    FORMAT_VERSION,
    PersistError,
    load_model,
    save_model,
)
from banglasent.models.tree import (
    ForestModel,
    TreeModel,
    forest_positive_proba,
    forest_score_one,
    gini,
    train_forest,
    train_tree,
    tree_positive_proba,
    tree_score_one,
)

__all__ = [
    "MODEL_KINDS",
    "DEFAULT_PARAMS",
    "ModelError",
    "TrainConfig",
    "LinearModel",
    "NBModel",
    "TreeModel",
    "ForestModel",
    "KNNModel",
    "PersistError",
    "train_model",
    "train_logreg",
    "train_linear_svm",
    "train_sgd",
    "train_mnb",
    "train_tree",
    "train_forest",
    "fit_knn",
    "decision_scores",
    "decision_score",
    "score_threshold",
    "predict_labels",
    "predict_proba",
    "knn_predict",
    "save_model",
    "load_model",
    "gini",
    "mean_logistic_loss",
    "mean_hinge_loss",
]

MODEL_KINDS = ("logreg", "sgd", "svc", "mnb", "knn", "tree", "forest")

# Hyperparameter defaults per kind; config files may override any subset.
DEFAULT_PARAMS: dict = {
    "logreg": {"learning_rate": 0.1, "epochs": 100, "l2": 1e-4, "seed": 123},
    "sgd": {"learning_rate": 0.1, "epochs": 100, "l2": 1e-4, "seed": 123, "loss": "hinge"},
    "svc": {"learning_rate": 0.1, "epochs": 100, "l2": 1e-4, "seed": 123},
    "mnb": {"alpha": 1.0},
    "knn": {"k": 5, "metric": "cosine"},
    "tree": {"max_depth": None, "min_samples_split": 2, "seed": 123},
    "forest": {
        "n_trees": 100,
        "max_depth": None,
        "min_samples_split": 2,
        "feature_subset": None,
        "seed": 123,
        "bootstrap": True,
    },
}


def resolve_params(kind: str, overrides: dict | None = None) -> dict:
    """Merge overrides onto the kind's defaults, rejecting unknown keys."""
    if kind not in MODEL_KINDS:
        raise ModelError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    params = dict(DEFAULT_PARAMS[kind])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ModelError(
                f"unknown hyperparameter {key!r} for model {kind!r}; "
                f"valid keys: {sorted(params)}"
            )
        params[key] = value
    return params


def train_model(kind: str, X: FeatureMatrix, y, overrides: dict | None = None):
    """Train one model by registry name with defaults plus overrides."""
    p = resolve_params(kind, overrides)
    if kind == "logreg":
        cfg = TrainConfig(p["learning_rate"], p["epochs"], p["l2"], p["seed"], "logistic")
        return train_logreg(X, y, cfg)
    if kind == "sgd":
        cfg = TrainConfig(p["learning_rate"], p["epochs"], p["l2"], p["seed"], p["loss"])
        return train_sgd(X, y, cfg)
    if kind == "svc":
        cfg = TrainConfig(p["learning_rate"], p["epochs"], p["l2"], p["seed"], "hinge")
        return train_linear_svm(X, y, cfg)
    if kind == "mnb":
        return train_mnb(X, y, alpha=p["alpha"])
    if kind == "knn":
        return fit_knn(X, y, k=p["k"], metric=p["metric"])
    if kind == "tree":
        return train_tree(
            X, y, max_depth=p["max_depth"],
            min_samples_split=p["min_samples_split"], seed=p["seed"],
        )
    return train_forest(
        X, y, n_trees=p["n_trees"], max_depth=p["max_depth"],
        min_samples_split=p["min_samples_split"],
        feature_subset=p["feature_subset"], seed=p["seed"], bootstrap=p["bootstrap"],
    )


def score_threshold(model) -> float:
    """Decision threshold paired with decision_scores: 0 for margin-like
    scores (linear, naive Bayes), 0.5 for probability-like ones."""
    if isinstance(model, (LinearModel, NBModel)):
        return 0.0
    if isinstance(model, (TreeModel, ForestModel, KNNModel)):
        return 0.5
    raise ModelError(f"unknown model type {type(model).__name__}")


def decision_scores(model, X: FeatureMatrix) -> np.ndarray:
    """Uniform batch scores; higher always means more positive."""
    if isinstance(model, LinearModel):
        return linear_scores(model, X)
    if isinstance(model, NBModel):
        return nb_scores(model, X)
    if isinstance(model, TreeModel):
        return tree_positive_proba(model, X)
    if isinstance(model, ForestModel):
        return forest_positive_proba(model, X)
    if isinstance(model, KNNModel):
        return knn_scores(model, X)
    raise ModelError(f"unknown model type {type(model).__name__}")


def decision_score(model, x: SparseVector) -> float:
    """Single-vector score, bit-equal to the batch path."""
    return float(decision_scores(model, FeatureMatrix.from_vectors([x]))[0])


def predict_labels(model, X: FeatureMatrix) -> np.ndarray:
    """Hard labels: score strictly above the model's threshold, else 0."""
    return (decision_scores(model, X) > score_threshold(model)).astype(np.int64)
