"""Multinomial naive Bayes, closed form with additive smoothing.

Likelihoods come straight from per-class feature totals:

    P(t | c) = (count(t, c) + alpha) / (total(c) + alpha * V)

and priors from class frequencies. Feature values are treated as
occurrence mass; any non-negative reals are accepted (tf-idf weights
included), negatives are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from banglasent.features import FeatureMatrix, SparseVector
from banglasent.models.linear import ModelError, _check_train_input

__all__ = ["NBModel", "train_mnb", "nb_scores", "nb_score"]


@dataclass(frozen=True, eq=False)
class NBModel:
    """Log priors (2,) and per-class log likelihoods (2, V)."""

    log_priors: np.ndarray
    log_likelihoods: np.ndarray
    alpha: float

    def __post_init__(self):
        if self.log_priors.shape != (2,) or self.log_likelihoods.ndim != 2:
            raise ModelError("malformed naive Bayes parameter shapes")
        if self.log_likelihoods.shape[0] != 2:
            raise ModelError("exactly two classes are supported")
        if not np.isclose(np.exp(self.log_priors).sum(), 1.0, atol=1e-9):
            raise ModelError("priors must sum to 1")
        sums = np.exp(self.log_likelihoods).sum(axis=1)
        if not np.allclose(sums, 1.0, atol=1e-9):
            raise ModelError("per-class likelihoods must sum to 1")

    @property
    def dim(self) -> int:
        return int(self.log_likelihoods.shape[1])


def train_mnb(X: FeatureMatrix, y, alpha: float = 1.0) -> NBModel:
    """Fit the closed-form parameters; deterministic, no iteration.

    Raises:
        ModelError: non-positive alpha, negative feature values, a single
            class, or shape mismatches.
    """
    if not alpha > 0:
        raise ModelError(f"alpha must be positive, got {alpha}")
    y = _check_train_input(X, y)
    if X.nnz and X.data.min() < 0:
        raise ModelError("naive Bayes requires non-negative feature values")
    n = X.n_rows
    priors = np.array([(y == 0).sum() / n, (y == 1).sum() / n], dtype=np.float64)
    lik = np.empty((2, X.dim), dtype=np.float64)
    for c in (0, 1):
        totals = X.select_rows(np.flatnonzero(y == c)).column_sums()
        lik[c] = (totals + alpha) / (totals.sum() + alpha * X.dim)
    return NBModel(
        log_priors=np.log(priors),
        log_likelihoods=np.log(lik),
        alpha=float(alpha),
    )


def nb_scores(model: NBModel, X: FeatureMatrix) -> np.ndarray:
    """Log-posterior difference (class 1 minus class 0) for every row."""
    if X.dim != model.dim:
        raise ModelError(f"feature dimension {X.dim} does not match model {model.dim}")
    contrast = model.log_likelihoods[1] - model.log_likelihoods[0]
    return X.matvec(contrast) + (model.log_priors[1] - model.log_priors[0])


def nb_score(model: NBModel, x: SparseVector) -> float:
    """Log-posterior difference for a single vector; bit-equal to the batch path."""
    return float(nb_scores(model, FeatureMatrix.from_vectors([x]))[0])
