"""Decision tree (CART, Gini impurity) and bagged forest, from first principles.

Trees are stored as flat parallel arrays (feature, threshold, left, right,
class counts) instead of linked nodes: construction is an explicit work
stack and prediction a while loop, so deep trees cannot hit the interpreter
recursion limit, and serialization is a plain array dump.

Splits test ``value <= threshold``; absent entries of the sparse rows count
as zero. Candidate thresholds are the midpoints between consecutive distinct
observed values, thinned to at most 32 evenly rank-spaced candidates per
feature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from banglasent.corpus import _SplitMix64
from banglasent.features import FeatureMatrix, SparseVector
from banglasent.models.linear import ModelError

__all__ = [
    "TreeModel",
    "ForestModel",
    "train_tree",
    "train_forest",
    "tree_positive_proba",
    "forest_positive_proba",
    "tree_score_one",
    "forest_score_one",
    "gini",
]

_MAX_THRESHOLDS = 32
_LEAF = -1


def gini(n0: int, n1: int) -> float:
    """Gini impurity of a two-class node: 1 - p0^2 - p1^2."""
    n = n0 + n1
    if n == 0:
        return 0.0
    p0 = n0 / n
    p1 = n1 / n
    return 1.0 - p0 * p0 - p1 * p1


@dataclass(frozen=True, eq=False)
class TreeModel:
    """Flat-array binary decision tree.

    ``feature[i] == -1`` marks node i as a leaf; otherwise ``left[i]`` /
    ``right[i]`` are the child positions for value <= / > threshold. ``counts``
    holds per-node class counts, from which leaf probabilities derive.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 2) training class counts
    max_depth: int | None
    min_samples_split: int

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def is_leaf(self, node: int) -> bool:
        return self.feature[node] == _LEAF

    def leaf_proba(self, node: int) -> np.ndarray:
        c = self.counts[node]
        return c / c.sum()

    def depth(self) -> int:
        """Longest root-to-leaf edge count, walked iteratively."""
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.is_leaf(node):
                best = max(best, d)
            else:
                stack.append((int(self.left[node]), d + 1))
                stack.append((int(self.right[node]), d + 1))
        return best

    def apply(self, x_get) -> int:
        """Leaf index for a sample given a feature-value getter."""
        node = 0
        while not self.is_leaf(node):
            f = int(self.feature[node])
            if x_get(f) <= self.threshold[node]:
                node = int(self.left[node])
            else:
                node = int(self.right[node])
        return node


@dataclass(frozen=True, eq=False)
class ForestModel:
    """Bagged trees with per-split feature subsampling."""

    trees: tuple
    feature_subset: int
    seeds: tuple
    bootstrap: bool

    @property
    def n_trees(self) -> int:
        return len(self.trees)


class _TreeBuilder:
    def __init__(self, X, y, max_depth, min_samples_split, max_features, rng):
        self.X = X
        self.y = y
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.rng = rng
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.counts = []

    def build(self, rows: np.ndarray) -> int:
        root = self._new_node(rows)
        stack = [(root, rows, 0)]
        while stack:
            node, node_rows, depth = stack.pop()
            if self._should_stop(node, node_rows, depth):
                continue
            found = self._best_split(node_rows)
            if found is None:
                continue
            feat, thr, go_left = found
            left_rows = node_rows[go_left]
            right_rows = node_rows[~go_left]
            self.feature[node] = feat
            self.threshold[node] = thr
            self.left[node] = self._new_node(left_rows)
            self.right[node] = self._new_node(right_rows)
            stack.append((self.left[node], left_rows, depth + 1))
            stack.append((self.right[node], right_rows, depth + 1))
        return root

    def _new_node(self, rows) -> int:
        yr = self.y[rows]
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.counts.append([int((yr == 0).sum()), int((yr == 1).sum())])
        return len(self.feature) - 1

    def _should_stop(self, node, rows, depth) -> bool:
        n0, n1 = self.counts[node]
        if n0 == 0 or n1 == 0:
            return True
        if self.max_depth is not None and depth >= self.max_depth:
            return True
        return len(rows) < self.min_samples_split

    def _candidate_features(self) -> np.ndarray:
        dim = self.X.dim
        if self.max_features >= dim:
            return np.arange(dim, dtype=np.int64)
        # Partial Fisher-Yates draw of max_features distinct indices.
        pool = np.arange(dim, dtype=np.int64)
        for i in range(self.max_features):
            j = i + self.rng.below(dim - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[: self.max_features]

    def _best_split(self, rows):
        """Scan candidate features; first strict minimum of weighted Gini wins."""
        yr = self.y[rows].astype(np.float64)
        n = len(rows)
        best = None  # (weighted gini, feature, threshold)
        for feat in self._candidate_features():
            col = self.X.column_values(int(feat), rows)
            order = np.argsort(col, kind="stable")
            sc = col[order]
            sy = yr[order]
            distinct = np.flatnonzero(sc[:-1] < sc[1:]) + 1
            if distinct.size == 0:
                continue
            if distinct.size > _MAX_THRESHOLDS:
                picks = np.round(
                    np.linspace(0, distinct.size - 1, _MAX_THRESHOLDS)
                ).astype(np.int64)
                distinct = distinct[np.unique(picks)]
            pre1 = np.cumsum(sy)
            total1 = pre1[-1]
            nl = distinct.astype(np.float64)
            n1l = pre1[distinct - 1]
            n0l = nl - n1l
            nr = n - nl
            n1r = total1 - n1l
            n0r = nr - n1r
            gl = 1.0 - (n0l / nl) ** 2 - (n1l / nl) ** 2
            gr = 1.0 - (n0r / nr) ** 2 - (n1r / nr) ** 2
            weighted = (nl * gl + nr * gr) / n
            k = int(np.argmin(weighted))
            score = float(weighted[k])
            if best is None or score < best[0]:
                b = int(distinct[k])
                thr = (sc[b - 1] + sc[b]) / 2.0
                best = (score, int(feat), thr)
        if best is None:
            return None
        _, feat, thr = best
        go_left = self.X.column_values(feat, rows) <= thr
        return feat, thr, go_left

    def finish(self, max_depth, min_samples_split) -> TreeModel:
        return TreeModel(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            counts=np.asarray(self.counts, dtype=np.int64),
            max_depth=max_depth,
            min_samples_split=min_samples_split,
        )


def _check_tree_input(X: FeatureMatrix, y) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if X.n_rows != len(y):
        raise ModelError(f"row count {X.n_rows} does not match {len(y)} labels")
    if len(y) == 0:
        raise ModelError("training needs at least one example")
    if not np.isin(y, (0, 1)).all():
        raise ModelError("labels must be 0 or 1")
    if not np.isfinite(X.data).all():
        raise ModelError("feature matrix contains non-finite values")
    return y


def train_tree(
    X: FeatureMatrix,
    y,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    seed: int = 123,
) -> TreeModel:
    """Greedy CART fit on all features.

    Single-class input yields a single-leaf tree (not an error). The seed is
    recorded for interface uniformity; without feature subsampling nothing
    random happens.
    """
    y = _check_tree_input(X, y)
    if min_samples_split < 2:
        raise ModelError(f"min_samples_split must be at least 2, got {min_samples_split}")
    if max_depth is not None and max_depth < 1:
        raise ModelError(f"max_depth must be positive or None, got {max_depth}")
    builder = _TreeBuilder(
        X, y, max_depth, min_samples_split, max_features=X.dim, rng=_SplitMix64(seed)
    )
    builder.build(np.arange(X.n_rows, dtype=np.int64))
    return builder.finish(max_depth, min_samples_split)


def train_forest(
    X: FeatureMatrix,
    y,
    n_trees: int = 100,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    feature_subset: int | None = None,
    seed: int = 123,
    bootstrap: bool = True,
) -> ForestModel:
    """Bagged CART trees with per-split feature subsampling.

    Each tree gets its own pre-drawn seed from the root seed, so the result
    does not depend on build order. ``feature_subset`` defaults to
    ceil(sqrt(V)).
    """
    y = _check_tree_input(X, y)
    if n_trees < 1:
        raise ModelError(f"n_trees must be at least 1, got {n_trees}")
    if feature_subset is None:
        feature_subset = math.ceil(math.sqrt(X.dim))
    if not 1 <= feature_subset <= X.dim:
        raise ModelError(
            f"feature_subset must lie in [1, {X.dim}], got {feature_subset}"
        )
    root_rng = _SplitMix64(seed)
    seeds = tuple(root_rng.next64() for _ in range(n_trees))
    n = X.n_rows
    trees = []
    for tree_seed in seeds:
        rng = _SplitMix64(tree_seed)
        if bootstrap:
            rows = np.sort(np.array([rng.below(n) for _ in range(n)], dtype=np.int64))
        else:
            rows = np.arange(n, dtype=np.int64)
        builder = _TreeBuilder(
            X, y, max_depth, min_samples_split, max_features=feature_subset, rng=rng
        )
        builder.build(rows)
        trees.append(builder.finish(max_depth, min_samples_split))
    return ForestModel(
        trees=tuple(trees),
        feature_subset=int(feature_subset),
        seeds=seeds,
        bootstrap=bootstrap,
    )


def _row_getter(X: FeatureMatrix, i: int):
    idx, vals = X.row_arrays(i)

    def get(f: int) -> float:
        k = np.searchsorted(idx, f)
        if k < len(idx) and idx[k] == f:
            return float(vals[k])
        return 0.0

    return get


def tree_positive_proba(tree: TreeModel, X: FeatureMatrix) -> np.ndarray:
    """P(label 1) at the reached leaf, for every row."""
    out = np.empty(X.n_rows, dtype=np.float64)
    for i in range(X.n_rows):
        leaf = tree.apply(_row_getter(X, i))
        out[i] = tree.leaf_proba(leaf)[1]
    return out


def forest_positive_proba(forest: ForestModel, X: FeatureMatrix) -> np.ndarray:
    """Mean of per-tree leaf probabilities, fixed summation order."""
    acc = np.zeros(X.n_rows, dtype=np.float64)
    for tree in forest.trees:
        acc += tree_positive_proba(tree, X)
    return acc / forest.n_trees


def tree_score_one(tree: TreeModel, x: SparseVector) -> float:
    return float(tree_positive_proba(tree, FeatureMatrix.from_vectors([x]))[0])


def forest_score_one(forest: ForestModel, x: SparseVector) -> float:
    return float(forest_positive_proba(forest, FeatureMatrix.from_vectors([x]))[0])
