"""k-nearest-neighbour classifier over stored training vectors.

Distances: ``euclidean`` is the usual L2 distance; ``cosine`` is
1 - (x . y) / (|x| |y|), with similarity defined as 0 whenever either
vector has zero norm. Neighbour ties at equal distance resolve to the lower
training index, so predictions are deterministic. The vote score is the
fraction of positive labels among the k neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from banglasent.features import FeatureMatrix, SparseVector
from banglasent.models.linear import ModelError

__all__ = ["KNNModel", "fit_knn", "knn_predict", "knn_scores", "METRICS"]

METRICS = ("cosine", "euclidean")


@dataclass(frozen=True, eq=False)
class KNNModel:
    """Stored training matrix and labels plus the vote parameters."""

    X: FeatureMatrix
    y: np.ndarray
    k: int
    metric: str

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise ModelError(f"k must be a positive odd integer, got {self.k}")
        if self.k > self.X.n_rows:
            raise ModelError(f"k={self.k} exceeds the {self.X.n_rows} stored examples")
        if self.metric not in METRICS:
            raise ModelError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.X.n_rows != len(self.y):
            raise ModelError("stored vectors and labels must align")

    @property
    def dim(self) -> int:
        return self.X.dim


def fit_knn(X: FeatureMatrix, y, k: int = 5, metric: str = "cosine") -> KNNModel:
    """Store the training set; all work happens at query time."""
    y = np.asarray(y, dtype=np.int64)
    if not np.isin(y, (0, 1)).all():
        raise ModelError("labels must be 0 or 1")
    if not np.isfinite(X.data).all():
        raise ModelError("feature matrix contains non-finite values")
    return KNNModel(X=X, y=y, k=k, metric=metric)


def _distances(model: KNNModel, x_dense: np.ndarray, x_norm: float) -> np.ndarray:
    dots = model.X.matvec(x_dense)
    train_norms = model.X.row_norms()
    if model.metric == "cosine":
        denom = train_norms * x_norm
        sims = np.where(denom > 0.0, dots / np.where(denom > 0.0, denom, 1.0), 0.0)
        return 1.0 - sims
    sq = train_norms**2 + x_norm**2 - 2.0 * dots
    return np.sqrt(np.maximum(sq, 0.0))


def knn_predict(model: KNNModel, x: SparseVector) -> tuple[int, float]:
    """Majority vote of the k nearest stored examples.

    Returns (label, score) where score is the positive fraction among the
    neighbours; the label applies the score > 0.5 rule (odd k, so no vote
    tie exists).
    """
    score = float(knn_scores(model, FeatureMatrix.from_vectors([x]))[0])
    return (1 if score > 0.5 else 0, score)


def knn_scores(model: KNNModel, X: FeatureMatrix) -> np.ndarray:
    """Vote score for every row of X."""
    if X.dim != model.dim:
        raise ModelError(f"feature dimension {X.dim} does not match model {model.dim}")
    out = np.empty(X.n_rows, dtype=np.float64)
    norms = X.row_norms()
    for i in range(X.n_rows):
        idx, vals = X.row_arrays(i)
        dense = np.zeros(X.dim, dtype=np.float64)
        dense[idx] = vals
        dist = _distances(model, dense, float(norms[i]))
        # Stable sort: among equal distances, lower training index wins.
        nearest = np.argsort(dist, kind="stable")[: model.k]
        out[i] = model.y[nearest].mean()
    return out
