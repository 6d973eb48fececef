"""Corpus loading, validation, and deterministic splitting."""

import csv
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banglasent.corpus import (
    ClassDistribution,
    Corpus,
    CorpusError,
    DataSplit,
    LabeledReview,
    _SplitMix64,
    class_distribution,
    find_duplicate_texts,
    load_corpus,
    split,
)

POS = "ভালো খাবার"
NEG = "বাজে খাবার"


def write_csv(path, rows, header=("review", "sentiment")):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        if header is not None:
            w.writerow(header)
        w.writerows(rows)
    return path


def toy_corpus(n_pos, n_neg):
    reviews = [LabeledReview(POS, 1) for _ in range(n_pos)]
    reviews += [LabeledReview(NEG, 0) for _ in range(n_neg)]
    return Corpus(reviews=tuple(reviews))


class TestLoadCorpus:
    def test_roundtrip_preserves_order_and_labels(self, tmp_path):
        p = write_csv(tmp_path / "c.csv", [(POS, "1"), (NEG, "0"), (POS + "!", "1")])
        corpus = load_corpus(p)
        assert corpus.texts() == [POS, NEG, POS + "!"]
        assert corpus.labels() == [1, 0, 1]
        assert corpus.source == str(p)

    def test_quoted_fields_with_commas_and_newlines(self, tmp_path):
        tricky = 'ভালো, "খুব" ভালো\nদ্বিতীয় লাইন'
        p = write_csv(tmp_path / "c.csv", [(tricky, "1"), (NEG, "0")])
        corpus = load_corpus(p)
        assert corpus.texts()[0] == tricky

    def test_bom_is_tolerated(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_bytes("﻿review,sentiment\r\nভালো,1\r\n".encode("utf-8"))
        assert load_corpus(p).texts() == ["ভালো"]

    def test_extra_columns_ignored(self, tmp_path):
        p = write_csv(
            tmp_path / "c.csv",
            [("x", POS, "1", "y"), ("x", NEG, "0", "y")],
            header=("id", "review", "sentiment", "note"),
        )
        assert load_corpus(p).labels() == [1, 0]

    def test_custom_column_names(self, tmp_path):
        p = write_csv(tmp_path / "c.csv", [(POS, "1")], header=("text", "label"))
        corpus = load_corpus(p, review_col="text", sentiment_col="label")
        assert corpus.texts() == [POS]

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorpusError, match="does not exist"):
            load_corpus(tmp_path / "nope.csv")

    def test_not_utf8(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_bytes(b"review,sentiment\n\xff\xfe,1\n")
        with pytest.raises(CorpusError, match="not valid UTF-8"):
            load_corpus(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("", encoding="utf-8")
        with pytest.raises(CorpusError, match="empty"):
            load_corpus(p)

    def test_header_only(self, tmp_path):
        p = write_csv(tmp_path / "c.csv", [])
        with pytest.raises(CorpusError, match="no data rows"):
            load_corpus(p)

    def test_missing_column(self, tmp_path):
        p = write_csv(tmp_path / "c.csv", [(POS, "1")], header=("review", "label"))
        with pytest.raises(CorpusError, match="missing column 'sentiment'"):
            load_corpus(p)

    def test_duplicate_column(self, tmp_path):
        p = write_csv(
            tmp_path / "c.csv", [(POS, POS, "1")], header=("review", "review", "sentiment")
        )
        with pytest.raises(CorpusError, match="duplicate column"):
            load_corpus(p)

    def test_bad_labels_reported_with_record_numbers(self, tmp_path):
        p = write_csv(
            tmp_path / "c.csv",
            [(POS, "1"), (NEG, "2"), (POS, "positive"), (NEG, "0")],
        )
        with pytest.raises(CorpusError) as exc:
            load_corpus(p)
        assert exc.value.rows == (3, 4)
        assert "labels outside {0, 1}" in str(exc.value)

    def test_empty_texts_reported(self, tmp_path):
        p = write_csv(tmp_path / "c.csv", [("", "1"), ("   ", "0"), (POS, "1")])
        with pytest.raises(CorpusError) as exc:
            load_corpus(p)
        assert exc.value.rows == (2, 3)

    def test_short_rows_reported(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("review,sentiment\nভালো,1\nabc\n", encoding="utf-8")
        with pytest.raises(CorpusError) as exc:
            load_corpus(p)
        assert exc.value.rows == (3,)

    def test_mixed_problems_aggregated(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("review,sentiment\n,1\nx\nভালো,7\n", encoding="utf-8")
        with pytest.raises(CorpusError) as exc:
            load_corpus(p)
        assert exc.value.rows == (2, 3, 4)

    def test_duplicate_texts_kept_with_warning(self, tmp_path, caplog):
        p = write_csv(tmp_path / "c.csv", [(POS, "1"), (POS, "1"), (NEG, "0")])
        with caplog.at_level("WARNING", logger="banglasent.corpus"):
            corpus = load_corpus(p)
        assert len(corpus) == 3
        assert "appear more than once" in caplog.text


class TestReviewAndSummary:
    def test_review_rejects_blank_text(self):
        with pytest.raises(ValueError, match="non-empty"):
            LabeledReview("  ", 1)

    def test_review_rejects_other_labels(self):
        with pytest.raises(ValueError, match="label"):
            LabeledReview(POS, 2)

    def test_class_distribution(self):
        corpus = toy_corpus(5, 3)
        dist = class_distribution(corpus)
        assert dist == ClassDistribution(positive=5, negative=3)
        assert dist.total == len(corpus)

    def test_find_duplicate_texts(self):
        reviews = (
            LabeledReview("ক", 1),
            LabeledReview("খ", 0),
            LabeledReview("ক", 0),
        )
        dupes = find_duplicate_texts(Corpus(reviews))
        assert dupes == {"ক": [0, 2]}


class TestSplitMix64:
    # First five outputs for seed 1234567 and the first output for seed 0,
    # from the reference C implementation's published streams.
    def test_published_vectors(self):
        g = _SplitMix64(1234567)
        assert [g.next64() for _ in range(5)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ]
        assert _SplitMix64(0).next64() == 0xE220A8397B1DCDAF

    def test_below_is_in_range(self):
        g = _SplitMix64(9)
        draws = [g.below(7) for _ in range(2000)]
        assert set(draws) == set(range(7))

    def test_shuffle_is_a_permutation(self):
        g = _SplitMix64(42)
        xs = list(range(100))
        g.shuffle(xs)
        assert sorted(xs) == list(range(100))
        assert xs != list(range(100))


class TestSplit:
    def test_train_size_is_floor(self):
        corpus = toy_corpus(11, 9)
        got = split(corpus, 0.8, seed=1)
        assert len(got.train) == math.floor(0.8 * 20) == 16
        assert len(got.test) == 4

    def test_partition_covers_everything_once(self):
        corpus = toy_corpus(13, 8)
        got = split(corpus, 0.7, seed=5)
        assert sorted(got.train + got.test) == list(range(21))
        assert not set(got.train) & set(got.test)

    def test_same_seed_same_partition(self):
        corpus = toy_corpus(20, 20)
        assert split(corpus, 0.8, seed=3) == split(corpus, 0.8, seed=3)

    def test_different_seed_different_partition(self):
        corpus = toy_corpus(30, 30)
        a = split(corpus, 0.5, seed=3)
        b = split(corpus, 0.5, seed=4)
        assert a.train != b.train

    def test_stratified_largest_remainder(self):
        # 11 pos, 9 neg, ratio 0.8: quota 16 = floor(8.8) + floor(7.2) + 1
        # leftover slot, which goes to the class with remainder 0.8 (positive).
        corpus = toy_corpus(11, 9)
        got = split(corpus, 0.8, seed=7)
        train_labels = [corpus[i].label for i in got.train]
        assert train_labels.count(1) == 9
        assert train_labels.count(0) == 7

    def test_stratified_remainder_tie_goes_to_label_zero(self):
        # 10 pos, 10 neg, ratio 0.75: both remainders are 0.5; the single
        # leftover slot goes to label 0.
        corpus = toy_corpus(10, 10)
        got = split(corpus, 0.75, seed=7)
        train_labels = [corpus[i].label for i in got.train]
        assert train_labels.count(0) == 8
        assert train_labels.count(1) == 7

    def test_unstratified_ignores_labels(self):
        corpus = toy_corpus(3, 17)
        got = split(corpus, 0.5, seed=11, stratified=False)
        assert len(got.train) == 10
        assert got.stratified is False

    def test_indices_are_sorted(self):
        corpus = toy_corpus(12, 12)
        got = split(corpus, 0.6, seed=2)
        assert list(got.train) == sorted(got.train)
        assert list(got.test) == sorted(got.test)

    def test_result_records_parameters(self):
        corpus = toy_corpus(4, 4)
        got = split(corpus, 0.5, seed=99)
        assert got == DataSplit(got.train, got.test, 0.5, 99, True)

    def test_empty_corpus_rejected(self):
        with pytest.raises(CorpusError, match="empty"):
            split(Corpus(reviews=()), 0.8)

    @pytest.mark.parametrize("ratio", [0.0, 1.0, -0.2, 1.7])
    def test_bad_ratio_rejected(self, ratio):
        with pytest.raises(CorpusError, match="ratio"):
            split(toy_corpus(2, 2), ratio)

    def test_single_class_stratified_rejected(self):
        with pytest.raises(CorpusError, match="both classes"):
            split(toy_corpus(5, 0), 0.8)

    def test_single_class_unstratified_allowed(self):
        got = split(toy_corpus(5, 0), 0.6, stratified=False)
        assert len(got.train) == 3

    @given(
        n_pos=st.integers(1, 60),
        n_neg=st.integers(1, 60),
        ratio=st.floats(0.05, 0.95),
        seed=st.integers(0, 2**32),
        stratified=st.booleans(),
    )
    @settings(max_examples=60, deadline=None)
    def test_split_properties(self, n_pos, n_neg, ratio, seed, stratified):
        """For any inputs: exact floor train size, disjoint cover, and with
        stratification each class contributes floor or floor+1 of its share."""
        corpus = toy_corpus(n_pos, n_neg)
        got = split(corpus, ratio, seed=seed, stratified=stratified)
        n = n_pos + n_neg
        assert len(got.train) == math.floor(ratio * n)
        assert sorted(got.train + got.test) == list(range(n))
        if stratified:
            train_pos = sum(corpus[i].label for i in got.train)
            assert math.floor(ratio * n_pos) <= train_pos <= math.floor(ratio * n_pos) + 1
