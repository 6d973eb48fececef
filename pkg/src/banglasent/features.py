"""Featurization: n-grams, vocabulary fitting, count / tf-idf weighting, embeddings.

Document vectors are sparse. The tf-idf weighting comes in two selectable
variants:

* ``raw-ratio``: weight = tf(w, r) * N / df(w). The inverse document
  frequency enters as a plain ratio, no logarithm and no normalization.
* ``smoothed-log``: weight = tf * (1 + ln((1 + N) / (1 + df))), followed by
  per-document L2 normalization. This is the conventional formulation most
  vectorizer libraries ship.

``raw-ratio`` is the default; reports always name the variant in use.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    "FeatureError",
    "SparseVector",
    "Vocabulary",
    "FeatureMatrix",
    "DocTermMatrix",
    "EmbeddingTable",
    "TFIDF_VARIANTS",
    "ngrams",
    "fit_vocabulary",
    "count_vectorize",
    "count_matrix",
    "tfidf_weight",
    "tfidf_vector",
    "tfidf_matrix",
    "load_embeddings",
    "embed_document",
    "embedding_matrix",
    "export_vocabulary",
]

TFIDF_VARIANTS = ("raw-ratio", "smoothed-log")


class FeatureError(ValueError):
    """A featurization precondition was violated."""


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, weight) pairs over a fixed dimension, no explicit zeros."""

    indices: tuple[int, ...]
    weights: tuple[float, ...]
    dim: int

    def __post_init__(self):
        if len(self.indices) != len(self.weights):
            raise FeatureError("indices and weights must have equal length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise FeatureError("indices must be strictly increasing")
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= self.dim):
            raise FeatureError(f"indices must lie in [0, {self.dim})")
        if any(w == 0.0 for w in self.weights):
            raise FeatureError("explicit zero weights are not allowed")

    @classmethod
    def from_pairs(cls, pairs, dim: int) -> "SparseVector":
        """Build from unordered (index, weight) pairs, dropping zero weights."""
        kept = sorted((i, float(w)) for i, w in pairs if w != 0.0)
        return cls(
            indices=tuple(i for i, _ in kept),
            weights=tuple(w for _, w in kept),
            dim=dim,
        )

    @classmethod
    def from_dense(cls, arr) -> "SparseVector":
        arr = np.asarray(arr, dtype=np.float64)
        nz = np.flatnonzero(arr)
        return cls(
            indices=tuple(int(i) for i in nz),
            weights=tuple(float(arr[i]) for i in nz),
            dim=int(arr.shape[0]),
        )

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.float64)
        if self.indices:
            out[list(self.indices)] = self.weights
        return out


@dataclass(frozen=True)
class Vocabulary:
    """Frozen n-gram index with document frequencies.

    ``index`` maps each retained n-gram to a dense position in ``0..V-1``
    assigned lexicographically; ``df`` (aligned with the index) counts the
    fitting documents each term occurred in; ``n_docs`` is how many documents
    the fit saw.
    """

    index: dict  # term -> position
    df: tuple[int, ...]
    ngram_range: tuple[int, int]
    min_df: int
    n_docs: int

    def __post_init__(self):
        if sorted(self.index.values()) != list(range(len(self.index))):
            raise FeatureError("vocabulary indices must be dense 0..V-1")
        if len(self.df) != len(self.index):
            raise FeatureError("df table must align with the index")
        floor = max(1, self.min_df)
        for term, pos in self.index.items():
            if not floor <= self.df[pos] <= self.n_docs:
                raise FeatureError(
                    f"df[{term!r}] = {self.df[pos]} outside [{floor}, {self.n_docs}]"
                )

    @property
    def size(self) -> int:
        return len(self.index)

    def terms(self) -> list[str]:
        """Terms in index order."""
        out = [""] * len(self.index)
        for term, pos in self.index.items():
            out[pos] = term
        return out

    def to_dict(self) -> dict:
        return {
            "terms": self.terms(),
            "df": list(self.df),
            "ngram_range": list(self.ngram_range),
            "min_df": self.min_df,
            "n_docs": self.n_docs,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Vocabulary":
        terms = payload["terms"]
        return cls(
            index={t: i for i, t in enumerate(terms)},
            df=tuple(int(x) for x in payload["df"]),
            ngram_range=tuple(payload["ngram_range"]),
            min_df=int(payload["min_df"]),
            n_docs=int(payload["n_docs"]),
        )


class FeatureMatrix:
    """Row-compressed sparse matrix with the operations the trainers need.

    Stored as standard CSR triplets (data, indices, indptr) over float64.
    Row indices within each row are strictly increasing. All linear-algebra
    helpers use fixed summation order, so results are reproducible bit for
    bit across runs.
    """

    def __init__(self, data, indices, indptr, dim: int):
        self.data = np.asarray(data, dtype=np.float64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.dim = int(dim)
        if self.indptr.ndim != 1 or self.indptr[0] != 0:
            raise FeatureError("indptr must start at zero")
        if np.any(np.diff(self.indptr) < 0):
            raise FeatureError("indptr must be non-decreasing")
        if self.indptr[-1] != self.data.shape[0] or self.data.shape != self.indices.shape:
            raise FeatureError("triplet lengths are inconsistent")
        if self.data.size and (self.indices.min() < 0 or self.indices.max() >= dim):
            raise FeatureError(f"column indices must lie in [0, {dim})")
        self._csc = None
        self._row_ids = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_vectors(cls, vectors: list[SparseVector], dim: int | None = None):
        if dim is None:
            if not vectors:
                raise FeatureError("cannot infer dimension from zero rows")
            dim = vectors[0].dim
        if any(v.dim != dim for v in vectors):
            raise FeatureError("all rows must share one dimension")
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        np.cumsum([v.nnz for v in vectors], out=indptr[1:])
        data = np.fromiter(
            (w for v in vectors for w in v.weights), dtype=np.float64, count=indptr[-1]
        )
        idx = np.fromiter(
            (i for v in vectors for i in v.indices), dtype=np.int64, count=indptr[-1]
        )
        return cls(data, idx, indptr, dim)

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise FeatureError("dense input must be 2-D")
        mask = arr != 0.0
        indptr = np.zeros(arr.shape[0] + 1, dtype=np.int64)
        np.cumsum(mask.sum(axis=1), out=indptr[1:])
        rows, cols = np.nonzero(mask)
        return cls(arr[rows, cols], cols, indptr, arr.shape[1])

    # -- shape and access ----------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self.indptr) - 1

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def row(self, i: int) -> SparseVector:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return SparseVector(
            indices=tuple(int(j) for j in self.indices[lo:hi]),
            weights=tuple(float(w) for w in self.data[lo:hi]),
            dim=self.dim,
        )

    def row_arrays(self, i: int):
        """Zero-copy (indices, values) views of row ``i`` for hot loops."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.dim), dtype=np.float64)
        for i in range(self.n_rows):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            out[i, self.indices[lo:hi]] = self.data[lo:hi]
        return out

    # -- linear algebra ------------------------------------------------------

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """X @ v for a dense v of length ``dim``."""
        v = np.asarray(v, dtype=np.float64)
        out = np.zeros(self.n_rows, dtype=np.float64)
        if self.nnz == 0:
            return out
        prod = self.data * v[self.indices]
        lengths = np.diff(self.indptr)
        nonempty = lengths > 0
        # reduceat needs strictly increasing segment starts; empty rows are
        # excluded and keep their zero.
        out[nonempty] = np.add.reduceat(prod, self.indptr[:-1][nonempty])
        return out

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        """X.T @ v for a dense v of length ``n_rows``."""
        v = np.asarray(v, dtype=np.float64)
        if self.nnz == 0:
            return np.zeros(self.dim, dtype=np.float64)
        return np.bincount(
            self.indices, weights=self.data * v[self._row_index()], minlength=self.dim
        )

    def _row_index(self) -> np.ndarray:
        if self._row_ids is None:
            self._row_ids = np.repeat(
                np.arange(self.n_rows, dtype=np.int64), np.diff(self.indptr)
            )
        return self._row_ids

    def column_sums(self) -> np.ndarray:
        if self.nnz == 0:
            return np.zeros(self.dim, dtype=np.float64)
        return np.bincount(self.indices, weights=self.data, minlength=self.dim)

    def row_norms(self) -> np.ndarray:
        """Euclidean norm of every row."""
        sq = self.data * self.data
        out = np.zeros(self.n_rows, dtype=np.float64)
        if self.nnz:
            lengths = np.diff(self.indptr)
            nonempty = lengths > 0
            out[nonempty] = np.add.reduceat(sq, self.indptr[:-1][nonempty])
        return np.sqrt(out)

    def scale_rows(self, factors: np.ndarray) -> "FeatureMatrix":
        factors = np.asarray(factors, dtype=np.float64)
        data = self.data * factors[self._row_index()] if self.nnz else self.data.copy()
        return self._rebuild(data, self.indices.copy(), self.indptr.copy())

    def scale_columns(self, factors: np.ndarray) -> "FeatureMatrix":
        factors = np.asarray(factors, dtype=np.float64)
        data = self.data * factors[self.indices] if self.nnz else self.data.copy()
        return self._rebuild(data, self.indices.copy(), self.indptr.copy())

    def l2_normalize_rows(self) -> "FeatureMatrix":
        """Scale each row to unit Euclidean norm; zero rows stay zero."""
        norms = self.row_norms()
        inv = np.where(norms > 0.0, 1.0 / np.where(norms > 0.0, norms, 1.0), 0.0)
        return self.scale_rows(inv)

    def select_rows(self, rows) -> "FeatureMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        lengths = np.diff(self.indptr)[rows]
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        take = np.concatenate(
            [np.arange(self.indptr[r], self.indptr[r + 1]) for r in rows]
        ) if len(rows) else np.zeros(0, dtype=np.int64)
        return self._rebuild(self.data[take], self.indices[take], indptr)

    def _rebuild(self, data, indices, indptr) -> "FeatureMatrix":
        return FeatureMatrix(data, indices, indptr, self.dim)

    # -- column access (used by the tree learners) ---------------------------

    def _ensure_csc(self):
        if self._csc is None:
            order = np.argsort(self.indices, kind="stable")
            col_rows = self._row_index()[order] if self.nnz else np.zeros(0, np.int64)
            col_data = self.data[order]
            counts = np.bincount(self.indices, minlength=self.dim) if self.nnz else np.zeros(self.dim, np.int64)
            col_indptr = np.zeros(self.dim + 1, dtype=np.int64)
            np.cumsum(counts, out=col_indptr[1:])
            self._csc = (col_data, col_rows, col_indptr)
        return self._csc

    def column_values(self, j: int, rows) -> np.ndarray:
        """Values of column ``j`` at the given sorted row positions, zeros filled."""
        rows = np.asarray(rows, dtype=np.int64)
        col_data, col_rows, col_indptr = self._ensure_csc()
        lo, hi = col_indptr[j], col_indptr[j + 1]
        out = np.zeros(len(rows), dtype=np.float64)
        if hi > lo and len(rows):
            seg_rows = col_rows[lo:hi]
            pos = np.searchsorted(seg_rows, rows)
            pos_c = np.minimum(pos, len(seg_rows) - 1)
            hit = seg_rows[pos_c] == rows
            out[hit] = col_data[lo:hi][pos_c[hit]]
        return out


class DocTermMatrix(FeatureMatrix):
    """A FeatureMatrix whose columns are the terms of a shared Vocabulary."""

    def __init__(self, data, indices, indptr, vocab: Vocabulary):
        super().__init__(data, indices, indptr, vocab.size)
        self.vocab = vocab

    def _rebuild(self, data, indices, indptr) -> "DocTermMatrix":
        return DocTermMatrix(data, indices, indptr, self.vocab)

    @classmethod
    def from_vectors_vocab(cls, vectors: list[SparseVector], vocab: Vocabulary):
        base = FeatureMatrix.from_vectors(vectors, dim=vocab.size)
        return cls(base.data, base.indices, base.indptr, vocab)


def ngrams(tokens: list[str], lo: int, hi: int) -> list[str]:
    """All contiguous n-token windows for n in [lo, hi], space-joined, in order.

    Windows are emitted per n (all of n=lo first, then lo+1, ...).
    """
    if lo < 1:
        raise FeatureError(f"n-gram range must start at 1 or higher, got {lo}")
    if hi < lo:
        raise FeatureError(f"n-gram range upper bound {hi} below lower bound {lo}")
    out = []
    for n in range(lo, hi + 1):
        if n == 1:
            out.extend(tokens)
        else:
            out.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return out


def fit_vocabulary(
    docs: list[list[str]],
    ngram_range: tuple[int, int] = (1, 1),
    min_df: int = 1,
) -> Vocabulary:
    """Build a Vocabulary from tokenized documents.

    Retains exactly the n-grams whose document frequency reaches ``min_df``;
    positions are assigned in lexicographic term order, so two fits on equal
    input yield identical vocabularies.

    Raises:
        FeatureError: no documents, or nothing survives the ``min_df`` cut.
    """
    if not docs:
        raise FeatureError("cannot fit a vocabulary on zero documents")
    if min_df < 1:
        raise FeatureError(f"min_df must be at least 1, got {min_df}")
    lo, hi = ngram_range
    df_counts: dict[str, int] = {}
    for doc in docs:
        for term in set(ngrams(doc, lo, hi)):
            df_counts[term] = df_counts.get(term, 0) + 1
    kept = sorted(t for t, c in df_counts.items() if c >= min_df)
    if not kept:
        raise FeatureError(
            f"empty vocabulary: no n-gram reaches min_df={min_df} over {len(docs)} documents"
        )
    index = {t: i for i, t in enumerate(kept)}
    return Vocabulary(
        index=index,
        df=tuple(df_counts[t] for t in kept),
        ngram_range=(lo, hi),
        min_df=min_df,
        n_docs=len(docs),
    )


def count_vectorize(doc: list[str], vocab: Vocabulary) -> SparseVector:
    """Term-count vector of one document; out-of-vocabulary n-grams are ignored."""
    counts: dict[int, int] = {}
    for term in ngrams(doc, *vocab.ngram_range):
        pos = vocab.index.get(term)
        if pos is not None:
            counts[pos] = counts.get(pos, 0) + 1
    return SparseVector.from_pairs(counts.items(), dim=vocab.size)


def count_matrix(docs: list[list[str]], vocab: Vocabulary) -> DocTermMatrix:
    """Stack per-document count vectors into a document-term matrix."""
    return DocTermMatrix.from_vectors_vocab(
        [count_vectorize(d, vocab) for d in docs], vocab
    )


def _idf_factors(vocab: Vocabulary, variant: str) -> np.ndarray:
    df = np.asarray(vocab.df, dtype=np.float64)
    if np.any(df <= 0):
        raise FeatureError("vocabulary has a term with zero document frequency")
    if variant == "raw-ratio":
        return vocab.n_docs / df
    if variant == "smoothed-log":
        return 1.0 + np.log((1.0 + vocab.n_docs) / (1.0 + df))
    raise FeatureError(f"unknown tf-idf variant {variant!r}; use one of {TFIDF_VARIANTS}")


def tfidf_weight(tf: float, df: int, n_docs: int, variant: str = "raw-ratio") -> float:
    """Weight of one term: tf * N/df (raw-ratio) or tf * (1 + ln((1+N)/(1+df)))."""
    if variant == "raw-ratio":
        return tf * (n_docs / df)
    if variant == "smoothed-log":
        return tf * (1.0 + math.log((1.0 + n_docs) / (1.0 + df)))
    raise FeatureError(f"unknown tf-idf variant {variant!r}; use one of {TFIDF_VARIANTS}")


def tfidf_matrix(
    docs: list[list[str]],
    vocab: Vocabulary,
    variant: str = "raw-ratio",
) -> DocTermMatrix:
    """Tf-idf weighted document-term matrix.

    ``raw-ratio`` leaves rows unnormalized; ``smoothed-log`` L2-normalizes
    each row (empty rows stay zero).
    """
    mat = count_matrix(docs, vocab).scale_columns(_idf_factors(vocab, variant))
    if variant == "smoothed-log":
        mat = mat.l2_normalize_rows()
    return mat


def tfidf_vector(doc: list[str], vocab: Vocabulary, variant: str = "raw-ratio") -> SparseVector:
    """Tf-idf vector of a single document.

    Runs the exact batch code path on a one-document batch, so the result is
    bit-identical to the corresponding ``tfidf_matrix`` row.
    """
    return tfidf_matrix([doc], vocab, variant).row(0)


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    """Token to dense-vector lookup with a single shared dimension."""

    vectors: dict  # token -> np.ndarray of shape (dim,)
    dim: int
    source: str = ""

    @property
    def size(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a plain-text embedding file: each line ``token v1 v2 ... vd``.

    The dimension comes from the first line. Duplicate tokens keep their
    first vector (a warning is emitted). Blank lines are skipped.

    Raises:
        FeatureError: empty file, a line whose component count differs from
            the first line's, or a non-numeric component; errors name the
            offending line number.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dim = None
    dupes = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, comps = parts[0], parts[1:]
            if not comps:
                raise FeatureError(f"{path}:{lineno}: no vector components")
            if dim is None:
                dim = len(comps)
            elif len(comps) != dim:
                raise FeatureError(
                    f"{path}:{lineno}: expected {dim} components, found {len(comps)}"
                )
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError as exc:
                raise FeatureError(f"{path}:{lineno}: non-numeric component: {exc}") from None
            if token in vectors:
                dupes += 1
                continue
            vectors[token] = vec
    if dim is None:
        raise FeatureError(f"embedding file has no vectors: {path}")
    if dupes:
        logger.warning("%s: %d duplicate tokens ignored (first occurrence wins)", path, dupes)
    return EmbeddingTable(vectors=vectors, dim=dim, source=str(path))


def embed_document(tokens: list[str], table: EmbeddingTable) -> np.ndarray:
    """Mean of the vectors of in-table tokens; zero vector when none are known.

    Out-of-table tokens are skipped entirely rather than averaged in as
    zeros, so unknown words do not dilute short documents.
    """
    hits = [table.vectors[t] for t in tokens if t in table.vectors]
    if not hits:
        return np.zeros(table.dim, dtype=np.float64)
    return np.sum(hits, axis=0) / len(hits)


def embedding_matrix(docs: list[list[str]], table: EmbeddingTable) -> FeatureMatrix:
    """Stack mean-pooled document embeddings into a FeatureMatrix."""
    dense = np.zeros((len(docs), table.dim), dtype=np.float64)
    for i, doc in enumerate(docs):
        dense[i] = embed_document(doc, table)
    return FeatureMatrix.from_dense(dense)


def export_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Write the vocabulary as CSV ``term,index,df`` in index order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["term", "index", "df"])
        for pos, term in enumerate(vocab.terms()):
            w.writerow([term, pos, vocab.df[pos]])
