"""Loading, validation, summary, and train/test splitting of labeled review corpora.

The on-disk format is UTF-8 CSV with a header row and two relevant columns:
a review text column (RFC-4180 quoting) and an integer sentiment column
holding 0 (negative) or 1 (positive). Column names are configurable so
foreign files can be ingested without rewriting them.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

__all__ = [
    "CorpusError",
    "LabeledReview",
    "Corpus",
    "ClassDistribution",
    "DataSplit",
    "load_corpus",
    "class_distribution",
    "find_duplicate_texts",
    "split",
]

_MASK64 = (1 << 64) - 1


class CorpusError(ValueError):
    """A corpus file or corpus operation violated its contract.

    ``rows`` carries the offending 1-based CSV record numbers (the header is
    record 1) when the failure is row-scoped.
    """

    def __init__(self, message: str, rows: tuple[int, ...] = ()):
        super().__init__(message)
        self.rows = rows


@dataclass(frozen=True)
class LabeledReview:
    """One review text with its binary sentiment label (1 positive, 0 negative)."""

    text: str
    label: int

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("review text must be non-empty after trimming")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of labeled reviews."""

    reviews: tuple[LabeledReview, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.reviews)

    def __iter__(self):
        return iter(self.reviews)

    def __getitem__(self, i: int) -> LabeledReview:
        return self.reviews[i]

    def texts(self) -> list[str]:
        return [r.text for r in self.reviews]

    def labels(self) -> list[int]:
        return [r.label for r in self.reviews]


@dataclass(frozen=True)
class ClassDistribution:
    positive: int
    negative: int

    @property
    def total(self) -> int:
        return self.positive + self.negative


@dataclass(frozen=True)
class DataSplit:
    """A disjoint train/test partition of corpus indices.

    ``train`` and ``test`` are sorted index tuples; together they cover every
    corpus index exactly once, and ``len(train) == floor(ratio * N)``.
    """

    train: tuple[int, ...]
    test: tuple[int, ...]
    ratio: float
    seed: int
    stratified: bool


def load_corpus(
    path: str | Path,
    review_col: str = "review",
    sentiment_col: str = "sentiment",
) -> Corpus:
    """Load a labeled review corpus from a CSV file.

    Args:
        path: CSV file with a header row. A UTF-8 BOM is tolerated; anything
            that does not decode as UTF-8 is an error.
        review_col: header name of the review text column.
        sentiment_col: header name of the 0/1 label column.

    Returns:
        A Corpus preserving file order.

    Raises:
        CorpusError: missing file, undecodable bytes, missing or duplicated
            header names, labels outside {0, 1}, empty review texts (the error
            lists the offending record numbers), or a file with no data rows.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file does not exist: {path}")
    try:
        # utf-8-sig strips a leading BOM (spreadsheet exports) but is
        # otherwise strict utf-8.
        raw = path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"corpus file is not valid UTF-8: {path}: {exc}") from exc

    # StringIO (not splitlines) so quoted fields may span lines.
    reader = csv.reader(io.StringIO(raw, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusError(f"corpus file is empty: {path}") from None

    for name in (review_col, sentiment_col):
        hits = [i for i, h in enumerate(header) if h == name]
        if not hits:
            raise CorpusError(f"missing column {name!r} in header {header!r}")
        if len(hits) > 1:
            raise CorpusError(f"duplicate column {name!r} in header {header!r}")
    text_idx = header.index(review_col)
    label_idx = header.index(sentiment_col)
    width = max(text_idx, label_idx) + 1

    reviews: list[LabeledReview] = []
    short_rows: list[int] = []
    bad_labels: list[int] = []
    empty_texts: list[int] = []
    for recno, row in enumerate(reader, start=2):
        if len(row) < width:
            short_rows.append(recno)
            continue
        text = row[text_idx]
        label_raw = row[label_idx].strip()
        if label_raw not in ("0", "1"):
            bad_labels.append(recno)
            continue
        if not text.strip():
            empty_texts.append(recno)
            continue
        reviews.append(LabeledReview(text=text, label=int(label_raw)))

    problems = []
    if short_rows:
        problems.append(f"rows with too few fields: {_fmt_rows(short_rows)}")
    if bad_labels:
        problems.append(f"labels outside {{0, 1}}: {_fmt_rows(bad_labels)}")
    if empty_texts:
        problems.append(f"empty review texts: {_fmt_rows(empty_texts)}")
    if problems:
        raise CorpusError(
            f"rejected rows in {path}: " + "; ".join(problems),
            rows=tuple(sorted(short_rows + bad_labels + empty_texts)),
        )
    if not reviews:
        raise CorpusError(f"corpus has a header but no data rows: {path}")

    corpus = Corpus(reviews=tuple(reviews), source=str(path))
    dupes = find_duplicate_texts(corpus)
    if dupes:
        logger.warning(
            "%d review texts appear more than once (kept; first few: %s)",
            len(dupes),
            list(dupes)[:3],
        )
    logger.info("loaded %d reviews from %s", len(corpus), path)
    return corpus


def _fmt_rows(rows: list[int], limit: int = 20) -> str:
    shown = ", ".join(str(r) for r in rows[:limit])
    if len(rows) > limit:
        shown += f", ... ({len(rows)} total)"
    return shown


def class_distribution(corpus: Corpus) -> ClassDistribution:
    """Count reviews per label. Totals always equal the corpus size."""
    counts = Counter(r.label for r in corpus.reviews)
    return ClassDistribution(positive=counts.get(1, 0), negative=counts.get(0, 0))


def find_duplicate_texts(corpus: Corpus) -> dict[str, list[int]]:
    """Map each review text occurring more than once to its corpus indices."""
    seen: dict[str, list[int]] = {}
    for i, r in enumerate(corpus.reviews):
        seen.setdefault(r.text, []).append(i)
    return {t: idx for t, idx in seen.items() if len(idx) > 1}


class _SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014).

    Chosen over a library RNG so the shuffle behind ``split`` is pinned to a
    short, documented algorithm: the same seed yields the same partition on
    any platform, forever.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        # Unbiased bounded draw by rejection.
        limit = (_MASK64 + 1) - ((_MASK64 + 1) % n)
        while True:
            v = self.next64()
            if v < limit:
                return v % n

    def shuffle(self, xs: list) -> None:
        # Fisher-Yates, high index downward.
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]


def split(
    corpus: Corpus,
    ratio: float,
    seed: int = 123,
    stratified: bool = True,
) -> DataSplit:
    """Partition corpus indices into train and test sets.

    The train set holds exactly ``floor(ratio * N)`` indices. With
    ``stratified=True`` each class contributes its floor share, with leftover
    slots assigned by largest fractional remainder (ties to the lower label),
    so per-class train fractions stay within 1/class-size of ``ratio``.

    Deterministic: shuffling uses SplitMix64-driven Fisher-Yates seeded with
    ``seed``, so the result depends only on (corpus order, ratio, seed,
    stratified).

    Raises:
        CorpusError: ratio outside (0, 1), an empty corpus, or stratification
            requested when a class has no members.
    """
    n = len(corpus)
    if n == 0:
        raise CorpusError("cannot split an empty corpus")
    if not (0.0 < ratio < 1.0):
        raise CorpusError(f"split ratio must be in (0, 1), got {ratio}")

    n_train = math.floor(ratio * n)
    rng = _SplitMix64(seed)

    if not stratified:
        order = list(range(n))
        rng.shuffle(order)
        train = sorted(order[:n_train])
        test = sorted(order[n_train:])
        return DataSplit(tuple(train), tuple(test), ratio, seed, stratified)

    by_label: dict[int, list[int]] = {0: [], 1: []}
    for i, r in enumerate(corpus.reviews):
        by_label[r.label].append(i)
    for label in (0, 1):
        if not by_label[label]:
            raise CorpusError(
                f"stratified split requires both classes; class {label} has no members"
            )

    # Largest-remainder apportionment of the train quota across classes.
    base = {lbl: math.floor(ratio * len(idx)) for lbl, idx in by_label.items()}
    leftover = n_train - sum(base.values())
    fracs = sorted(
        by_label,
        key=lambda lbl: (-(ratio * len(by_label[lbl]) - base[lbl]), lbl),
    )
    quota = dict(base)
    for lbl in fracs[:leftover]:
        quota[lbl] += 1

    train: list[int] = []
    test: list[int] = []
    for label in (0, 1):
        idx = list(by_label[label])
        rng.shuffle(idx)
        train.extend(idx[: quota[label]])
        test.extend(idx[quota[label] :])
    return DataSplit(tuple(sorted(train)), tuple(sorted(test)), ratio, seed, stratified)
