"""Model serialization: one self-describing JSON file per trained model.

Layout:

    {
      "format": "banglasent-model",
      "version": 1,
      "kind": "<registry name>",
      "feature_fingerprint": "<sha256 of the feature bundle>",
      "params": {... hyperparameters ...},
      "payload": {... learned parameters ...}
    }

Loading refuses a file whose fingerprint differs from the expected one, so a
model can never silently run against features it was not trained with.
Numeric arrays are stored as plain lists; keys are sorted on write, making
equal models byte-equal files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from banglasent.features import FeatureMatrix
from banglasent.models.knn import KNNModel
from banglasent.models.linear import LinearModel
from banglasent.models.naive_bayes import NBModel
from banglasent.models.tree import ForestModel, TreeModel

__all__ = ["save_model", "load_model", "PersistError", "FORMAT_NAME", "FORMAT_VERSION"]

FORMAT_NAME = "banglasent-model"
FORMAT_VERSION = 1


class PersistError(ValueError):
    """A model file is malformed, incompatible, or mismatched."""


def _tree_payload(tree: TreeModel) -> dict:
    return {
        "feature": tree.feature.tolist(),
        "threshold": tree.threshold.tolist(),
        "left": tree.left.tolist(),
        "right": tree.right.tolist(),
        "counts": tree.counts.tolist(),
        "max_depth": tree.max_depth,
        "min_samples_split": tree.min_samples_split,
    }


def _tree_from_payload(p: dict) -> TreeModel:
    return TreeModel(
        feature=np.asarray(p["feature"], dtype=np.int64),
        threshold=np.asarray(p["threshold"], dtype=np.float64),
        left=np.asarray(p["left"], dtype=np.int64),
        right=np.asarray(p["right"], dtype=np.int64),
        counts=np.asarray(p["counts"], dtype=np.int64),
        max_depth=p["max_depth"],
        min_samples_split=p["min_samples_split"],
    )


def _payload(model) -> dict:
    if isinstance(model, LinearModel):
        return {"weights": model.weights.tolist(), "bias": model.bias, "loss": model.loss}
    if isinstance(model, NBModel):
        return {
            "log_priors": model.log_priors.tolist(),
            "log_likelihoods": model.log_likelihoods.tolist(),
            "alpha": model.alpha,
        }
    if isinstance(model, TreeModel):
        return _tree_payload(model)
    if isinstance(model, ForestModel):
        return {
            "trees": [_tree_payload(t) for t in model.trees],
            "feature_subset": model.feature_subset,
            "seeds": list(model.seeds),
            "bootstrap": model.bootstrap,
        }
    if isinstance(model, KNNModel):
        return {
            "data": model.X.data.tolist(),
            "indices": model.X.indices.tolist(),
            "indptr": model.X.indptr.tolist(),
            "dim": model.X.dim,
            "y": model.y.tolist(),
            "k": model.k,
            "metric": model.metric,
        }
    raise PersistError(f"cannot serialize model type {type(model).__name__}")


def _restore(kind_payload: dict):
    kind = kind_payload["kind"]
    p = kind_payload["payload"]
    if kind in ("logreg", "svc", "sgd"):
        return LinearModel(
            weights=np.asarray(p["weights"], dtype=np.float64),
            bias=float(p["bias"]),
            loss=p["loss"],
        )
    if kind == "mnb":
        return NBModel(
            log_priors=np.asarray(p["log_priors"], dtype=np.float64),
            log_likelihoods=np.asarray(p["log_likelihoods"], dtype=np.float64),
            alpha=float(p["alpha"]),
        )
    if kind == "tree":
        return _tree_from_payload(p)
    if kind == "forest":
        return ForestModel(
            trees=tuple(_tree_from_payload(t) for t in p["trees"]),
            feature_subset=int(p["feature_subset"]),
            seeds=tuple(p["seeds"]),
            bootstrap=bool(p["bootstrap"]),
        )
    if kind == "knn":
        return KNNModel(
            X=FeatureMatrix(p["data"], p["indices"], p["indptr"], int(p["dim"])),
            y=np.asarray(p["y"], dtype=np.int64),
            k=int(p["k"]),
            metric=p["metric"],
        )
    raise PersistError(f"unknown model kind {kind!r}")


def save_model(
    model,
    kind: str,
    path: str | Path,
    feature_fingerprint: str,
    params: dict | None = None,
) -> None:
    """Write one model to a JSON file; equal inputs give byte-equal files."""
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": kind,
        "feature_fingerprint": feature_fingerprint,
        "params": params or {},
        "payload": _payload(model),
    }
    Path(path).write_text(
        json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=None,
                   separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_model(path: str | Path, expected_fingerprint: str | None = None):
    """Read a model file back; returns (model, kind, params, fingerprint).

    Raises:
        PersistError: unreadable or non-JSON file, wrong format marker or
            version, unknown kind, or a fingerprint that differs from
            ``expected_fingerprint``.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise PersistError(f"model file does not exist: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise PersistError(f"unreadable model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise PersistError(f"not a model file: {path}")
    if doc.get("version") != FORMAT_VERSION:
        raise PersistError(
            f"unsupported model format version {doc.get('version')!r} in {path}"
        )
    fingerprint = doc.get("feature_fingerprint", "")
    if expected_fingerprint is not None and fingerprint != expected_fingerprint:
        raise PersistError(
            f"feature fingerprint mismatch for {path}: model was trained with "
            f"{fingerprint[:12]}..., current features are {expected_fingerprint[:12]}..."
        )
    try:
        model = _restore(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PersistError):
            raise
        raise PersistError(f"corrupt model payload in {path}: {exc}") from exc
    return model, doc["kind"], doc.get("params", {}), fingerprint
