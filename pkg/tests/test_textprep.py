"""Text preparation stages: normalize, clean, tokenize, stopwords, stemming."""

import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banglasent.textprep import (
    BENGALI_KEEP_RANGES,
    ZWJ,
    ZWNJ,
    CleaningRules,
    PipelineConfig,
    StemRuleSet,
    StopwordList,
    clean,
    default_stem_rules,
    default_stopwords,
    load_stopwords,
    load_suffixes,
    normalize_unicode,
    preprocess,
    remove_stopwords,
    stem,
    tokenize,
)

# Mixed alphabet for property tests: Bengali letters, Bengali and ASCII
# digits, punctuation, Latin, emoji, joiners, whitespace.
MIXED = "কখগঘঙচছজঝাীুেো্য়ৎ০১9a Z.,!?\"'()-–/&%$#@৳\U0001F60B\U0001F355" + ZWJ + ZWNJ + " \t\n"
mixed_text = st.text(alphabet=MIXED, max_size=60)


class TestNormalize:
    def test_composes_vowel_sign(self):
        # E sign + AA sign compose to the single O sign codepoint.
        assert normalize_unicode("কো") == "কো"

    def test_unifies_nukta_spellings(self):
        # YYA is a composition exclusion, so NFC settles both spellings on
        # the decomposed YA + nukta sequence. What matters is convergence.
        assert normalize_unicode("য়") == normalize_unicode("য়")
        assert normalize_unicode("য়") == "য়"

    @given(mixed_text)
    def test_idempotent(self, s):
        once = normalize_unicode(s)
        assert normalize_unicode(once) == once


class TestClean:
    def test_keeps_plain_bengali(self):
        assert clean("খাবার ভালো") == "খাবার ভালো"

    def test_strips_ascii_punctuation(self):
        assert clean("ভালো!!! খুব, ভালো?") == "ভালো খুব ভালো"

    def test_strips_bengali_punctuation(self):
        assert clean("ভালো। খাবার॥") == "ভালো খাবার"

    def test_strips_digits_both_scripts(self):
        assert clean("ভালো ১২৩ 456 খাবার") == "ভালো খাবার"

    def test_strips_emoji_and_latin(self):
        assert clean("খাবার \U0001F60B good \U0001F44D") == "খাবার"

    def test_strips_currency_sign(self):
        assert clean("দাম ৳ ভালো") == "দাম ভালো"

    def test_replacement_is_space_not_removal(self):
        # Punctuation between words must not fuse them.
        assert clean("ভাল,মন্দ") == "ভাল মন্দ"
        assert clean("ভাল123মন্দ") == "ভাল মন্দ"

    def test_whitespace_collapse_and_trim(self):
        assert clean("  ভালো \t\t খাবার \n") == "ভালো খাবার"

    def test_joiner_kept_inside_conjunct(self):
        word = "র" + ZWJ + "্যাব"
        assert clean(word) == word

    def test_joiner_dropped_at_edges(self):
        assert clean(ZWJ + "ভাল" + ZWNJ) == "ভাল"
        assert clean("ভাল" + ZWJ + " " + ZWNJ + "মন্দ") == "ভাল মন্দ"

    def test_joiner_dropped_next_to_stripped_char(self):
        assert clean("ভাল" + ZWJ + "!x") == "ভাল"

    def test_empty_and_noise_only(self):
        assert clean("") == ""
        assert clean("!!! 123 abc \U0001F600") == ""

    def test_disabling_latin_keeps_it(self):
        rules = CleaningRules(strip_latin=False)
        assert clean("খাবার good", rules) == "খাবার good"

    def test_disabling_digits_keeps_both_scripts(self):
        rules = CleaningRules(strip_digits=False)
        assert clean("ভাল ১২ 34", rules) == "ভাল ১২ 34"

    def test_disabling_punctuation_keeps_it(self):
        rules = CleaningRules(strip_punctuation=False)
        assert clean("ভাল!", rules) == "ভাল!"

    @given(mixed_text)
    def test_idempotent(self, s):
        once = clean(s)
        assert clean(once) == once

    @given(mixed_text)
    def test_output_alphabet(self, s):
        """Cleaned text holds only kept codepoints, single spaces, and joiners."""
        out = clean(s)
        rules = CleaningRules()
        for ch in out:
            assert ch == " " or ch in (ZWJ, ZWNJ) or rules.is_kept(ch)
        assert "  " not in out
        assert out == out.strip()

    @given(mixed_text)
    def test_never_fuses_separated_words(self, s):
        """Cleaning cannot create a token that crosses an original space."""
        out_whole = set(tokenize(clean(s)))
        for part in s.split(" "):
            for tok in tokenize(clean(part)):
                assert any(tok in w for w in out_whole) or tok in out_whole


class TestKeepRanges:
    def test_bengali_digits_and_currency_excluded(self):
        rules = CleaningRules()
        assert not rules.is_kept("০")  # zero
        assert not rules.is_kept("৳")  # taka sign
        assert rules.is_kept("ক")  # KA
        assert rules.is_kept("য়")  # YYA
        assert rules.is_kept("ৰ")  # RA with middle diagonal

    def test_ranges_cover_block_minus_exclusions(self):
        kept = {
            cp
            for lo, hi in BENGALI_KEEP_RANGES
            for cp in range(lo, hi + 1)
        }
        assert 0x09E6 not in kept and 0x09EF not in kept
        assert 0x09F2 not in kept
        assert 0x0995 in kept and 0x09CD in kept


class TestTokenize:
    def test_splits_on_spaces(self):
        assert tokenize("ক খ  গ") == ["ক", "খ", "গ"]

    def test_empty(self):
        assert tokenize("") == []


class TestStopwords:
    def test_removal_preserves_order_and_repeats(self):
        sw = StopwordList(frozenset({"এই", "খুব"}))
        toks = ["এই", "খাবার", "খুব", "ভাল", "খাবার"]
        assert remove_stopwords(toks, sw) == ["খাবার", "ভাল", "খাবার"]

    def test_default_list_loads(self):
        sw = default_stopwords()
        assert len(sw) > 300
        assert "এবং" in sw
        assert "খাবার" not in sw

    def test_default_entries_are_normalized_single_tokens(self):
        for w in default_stopwords().words:
            assert w == unicodedata.normalize("NFC", w)
            assert " " not in w and w == w.strip()

    def test_load_ignores_comments_and_blanks(self, tmp_path):
        p = tmp_path / "sw.txt"
        p.write_text("# heading\nএই\n\nখুব  # trailing note\n", encoding="utf-8")
        sw = load_stopwords(p)
        assert sw.words == frozenset({"এই", "খুব"})
        assert sw.source == str(p)

    def test_load_normalizes_entries(self, tmp_path):
        # Either spelling of YYA in the file matches the normalized token.
        p = tmp_path / "sw.txt"
        p.write_text("হয়\n", encoding="utf-8")  # precomposed YYA
        sw = load_stopwords(p)
        assert normalize_unicode("হয়") in sw
        assert "হয়" in sw


class TestStem:
    RULES = StemRuleSet(suffixes=("টা", "গুলোতে", "ে", "ের", "রা"))

    def test_longest_suffix_wins(self):
        assert stem("খাবারগুলোতে", self.RULES) == "খাবার"

    def test_single_application(self):
        # One suffix only; the exposed ending is not re-stemmed.
        assert stem("বইটা", self.RULES) == "বই"

    def test_min_stem_guard_blocks_short_stems(self):
        assert stem("টা", self.RULES) == "টা"
        assert stem("কটা", self.RULES) == "কটা"

    def test_guard_falls_through_to_shorter_suffix(self):
        # The long match would leave 3 codepoints, under the minimum of 4,
        # so the shorter suffix gets its turn.
        rules = StemRuleSet(suffixes=("ারটা", "টা"), min_stem_length=4)
        assert stem("খাবারটা", rules) == "খাবার"

    def test_no_match_returns_token(self):
        assert stem("ভালো", self.RULES) == "ভালো"

    def test_default_rules_examples(self):
        rules = default_stem_rules()
        assert stem("খাবারটা", rules) == "খাবার"
        assert stem("খাবারগুলোতে", rules) == "খাবার"
        assert stem("ছেলেদেরকে", rules) == "ছেলে"
        assert stem("করেছিলাম", rules) == "করে"
        assert stem("ভালো", rules) == "ভালো"

    def test_ruleset_sorts_longest_first(self):
        rs = StemRuleSet(suffixes=("ে", "টা", "গুলোতে"))
        lens = [len(s) for s in rs.suffixes]
        assert lens == sorted(lens, reverse=True)

    def test_ruleset_rejects_empty_suffix(self):
        with pytest.raises(ValueError, match="non-empty"):
            StemRuleSet(suffixes=("টা", ""))

    def test_ruleset_rejects_bad_min_length(self):
        with pytest.raises(ValueError, match="positive"):
            StemRuleSet(suffixes=("টা",), min_stem_length=0)

    @given(st.text(alphabet="কখগঘচছজাি", min_size=0, max_size=12))
    @settings(max_examples=80)
    def test_output_is_suffix_removal_or_identity(self, token):
        rules = default_stem_rules()
        out = stem(token, rules)
        assert token.startswith(out)
        if out != token:
            assert token[len(out):] in rules.suffixes
            assert len(out) >= rules.min_stem_length


class TestSuffixLoading:
    def test_load_suffixes(self, tmp_path):
        p = tmp_path / "sfx.txt"
        p.write_text("টা\nগুলোতে # plural-locative\n", encoding="utf-8")
        rs = load_suffixes(p, min_stem_length=3)
        assert rs.suffixes == ("গুলোতে", "টা")
        assert rs.min_stem_length == 3

    def test_default_table_loads(self):
        rs = default_stem_rules()
        assert 30 <= len(rs.suffixes) <= 80
        assert "টা" in rs.suffixes and "দের" in rs.suffixes


class TestPreprocess:
    def test_full_pipeline(self):
        tokens, joined = preprocess("খাবারটা খুব ভালো!! \U0001F60B")
        assert tokens == ["খাবার", "ভালো"]
        assert joined == "খাবার ভালো"

    def test_stage_flags(self):
        config = PipelineConfig(drop_stopwords=False, stem=False)
        tokens, _ = preprocess("খাবারটা খুব ভালো!!", config)
        assert tokens == ["খাবারটা", "খুব", "ভালো"]

    def test_noise_only_gives_empty(self):
        tokens, joined = preprocess("!!! 123 wow \U0001F600")
        assert tokens == [] and joined == ""

    def test_normalization_feeds_later_stages(self):
        # Decomposed O sign must still clean as a kept letter cluster.
        tokens, _ = preprocess("ভালো!")
        assert tokens == ["ভালো"]

    @given(mixed_text)
    @settings(max_examples=60)
    def test_tokens_match_joined(self, s):
        tokens, joined = preprocess(s)
        assert joined == " ".join(tokens)
        assert all(tok for tok in tokens)
