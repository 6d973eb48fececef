"""Linear classifiers: batch-gradient logistic regression and stochastic
subgradient training for hinge or logistic loss.

All trainers minimize the L2-regularized mean loss

    (1/n) * sum_i loss(t_i * (w . x_i + b)) + (l2/2) * ||w||^2

with t_i = 2 y_i - 1 in {-1, +1}. The bias is never regularized. Training is
a pure function of (data, config): the stochastic trainers shuffle with a
dedicated deterministic generator, so equal seeds give byte-equal models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from banglasent.corpus import _SplitMix64
from banglasent.features import FeatureMatrix, SparseVector

__all__ = [
    "TrainConfig",
    "LinearModel",
    "ModelError",
    "train_logreg",
    "train_linear_svm",
    "train_sgd",
    "predict_proba",
    "linear_scores",
    "mean_logistic_loss",
    "mean_hinge_loss",
]

LOSSES = ("logistic", "hinge")


class ModelError(ValueError):
    """A training or prediction precondition was violated."""


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters shared by the gradient-trained linear models."""

    learning_rate: float = 0.1
    epochs: int = 100
    l2: float = 1e-4
    seed: int = 123
    loss: str = "logistic"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ModelError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ModelError(f"epochs must be at least 1, got {self.epochs}")
        if self.l2 < 0:
            raise ModelError(f"l2 must be non-negative, got {self.l2}")
        if self.loss not in LOSSES:
            raise ModelError(f"loss must be one of {LOSSES}, got {self.loss!r}")


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Weight vector, bias, and the loss the model was trained with."""

    weights: np.ndarray
    bias: float
    loss: str

    def __post_init__(self):
        if not (np.all(np.isfinite(self.weights)) and np.isfinite(self.bias)):
            raise ModelError("model parameters must be finite")

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])


def _check_train_input(X: FeatureMatrix, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if X.n_rows != len(y):
        raise ModelError(f"row count {X.n_rows} does not match {len(y)} labels")
    if len(y) < 2:
        raise ModelError("training needs at least two examples")
    if not np.isfinite(X.data).all():
        raise ModelError("feature matrix contains non-finite values")
    if len(np.unique(y)) < 2:
        raise ModelError("training needs both classes present")
    return y


def _sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically guarded logistic function (never overflows)."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _sigmoid_scalar(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def mean_logistic_loss(X: FeatureMatrix, y, w: np.ndarray, b: float, l2: float) -> float:
    """Regularized mean logistic loss at (w, b)."""
    t = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    z = X.matvec(w) + b
    return float(np.mean(np.logaddexp(0.0, -t * z)) + 0.5 * l2 * np.dot(w, w))


def mean_hinge_loss(X: FeatureMatrix, y, w: np.ndarray, b: float, l2: float) -> float:
    """Regularized mean hinge loss at (w, b)."""
    t = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    z = X.matvec(w) + b
    return float(np.mean(np.maximum(0.0, 1.0 - t * z)) + 0.5 * l2 * np.dot(w, w))


def logreg_gradient(
    X: FeatureMatrix, y, w: np.ndarray, b: float, l2: float
) -> tuple[np.ndarray, float]:
    """Gradient of the regularized mean logistic loss at (w, b)."""
    t = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    z = X.matvec(w) + b
    # d/dz ln(1 + exp(-t z)) = -t * sigmoid(-t z)
    residual = -t * _sigmoid(-t * z)
    grad_w = X.rmatvec(residual) / X.n_rows + l2 * w
    return grad_w, float(np.mean(residual))


def sample_gradient(
    w: np.ndarray, b: float, idx, vals, t: float, l2: float, loss: str
) -> tuple[np.ndarray, float]:
    """(Sub)gradient of one sample's regularized loss at (w, b).

    ``t`` is the +-1 label. For hinge, the subgradient at the kink
    (margin exactly 1) is the zero branch. The stochastic trainers apply
    exactly this quantity per visit, in multiplicative form.
    """
    z = float(np.dot(w[idx], vals)) + b
    margin = t * z
    if loss == "hinge":
        pull = 1.0 if margin < 1.0 else 0.0
    else:
        pull = _sigmoid_scalar(-margin)
    grad_w = l2 * w.copy()
    grad_w[idx] -= t * pull * np.asarray(vals, dtype=np.float64)
    return grad_w, -t * pull


def train_logreg(
    X: FeatureMatrix,
    y,
    cfg: TrainConfig | None = None,
    loss_history: list | None = None,
) -> LinearModel:
    """Full-batch gradient descent on the regularized mean logistic loss.

    Deterministic given (X, y, cfg); the seed is unused here (there is no
    sampling). Pass ``loss_history`` to record the objective before each
    update step.
    """
    cfg = cfg or TrainConfig()
    y = _check_train_input(X, y)
    w = np.zeros(X.dim, dtype=np.float64)
    b = 0.0
    for _ in range(cfg.epochs):
        if loss_history is not None:
            loss_history.append(mean_logistic_loss(X, y, w, b, cfg.l2))
        grad_w, grad_b = logreg_gradient(X, y, w, b, cfg.l2)
        w -= cfg.learning_rate * grad_w
        b -= cfg.learning_rate * grad_b
    return LinearModel(weights=w, bias=b, loss="logistic")


def train_sgd(X: FeatureMatrix, y, cfg: TrainConfig | None = None) -> LinearModel:
    """Per-sample stochastic subgradient descent, loss selectable via cfg.

    Visits every example once per epoch in an order drawn by a seeded
    shuffle; the regularizer enters as per-sample weight decay. Hinge uses
    the subgradient that is zero at the kink (margin exactly 1).
    """
    cfg = cfg or TrainConfig(loss="hinge")
    y = _check_train_input(X, y)
    t = 2.0 * y.astype(np.float64) - 1.0
    w = np.zeros(X.dim, dtype=np.float64)
    b = 0.0
    rng = _SplitMix64(cfg.seed)
    order = list(range(X.n_rows))
    decay = 1.0 - cfg.learning_rate * cfg.l2
    if decay <= 0.0:
        raise ModelError(
            f"learning_rate * l2 = {cfg.learning_rate * cfg.l2} >= 1 would flip "
            "the weight decay; lower one of them"
        )
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for i in order:
            idx, vals = X.row_arrays(i)
            z = float(np.dot(w[idx], vals)) + b
            margin = t[i] * z
            if cfg.loss == "hinge":
                pull = 1.0 if margin < 1.0 else 0.0
            else:
                pull = _sigmoid_scalar(-margin)
            w *= decay
            if pull != 0.0:
                step = cfg.learning_rate * t[i] * pull
                w[idx] += step * vals
                b += step
    return LinearModel(weights=w, bias=b, loss=cfg.loss)


def train_linear_svm(X: FeatureMatrix, y, cfg: TrainConfig | None = None) -> LinearModel:
    """Stochastic subgradient descent on the hinge objective (see train_sgd)."""
    cfg = cfg or TrainConfig(loss="hinge")
    if cfg.loss != "hinge":
        cfg = TrainConfig(
            learning_rate=cfg.learning_rate, epochs=cfg.epochs, l2=cfg.l2,
            seed=cfg.seed, loss="hinge",
        )
    return train_sgd(X, y, cfg)


def linear_scores(model: LinearModel, X: FeatureMatrix) -> np.ndarray:
    """Raw decision scores w . x + b for every row."""
    if X.dim != model.dim:
        raise ModelError(f"feature dimension {X.dim} does not match model {model.dim}")
    return X.matvec(model.weights) + model.bias


def predict_proba(model: LinearModel, x: SparseVector) -> float:
    """Positive-class probability 1 / (1 + exp(-(w . x + b))).

    Evaluated through the batch scoring path on a one-row matrix, so single
    and batch predictions agree bit for bit.
    """
    score = linear_scores(model, FeatureMatrix.from_vectors([x]))
    return _sigmoid_scalar(float(score[0]))
