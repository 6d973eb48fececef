"""Bengali review text preparation: normalize, clean, tokenize, de-stopword, stem.

The stages run in a fixed order (normalize -> clean -> tokenize -> stopword
filter -> stem -> rejoin); each stage is a pure function so documents can be
processed in parallel with identical results.

Cleaning keeps the Bengali letter ranges and replaces everything else
(punctuation, symbols, emoji, Latin letters, digits, stray scripts) with a
space, then collapses whitespace. Zero-width joiners inside Bengali conjuncts
are the one exception: they are retained so orthography survives, while
free-standing joiner runs are dropped.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib.resources import files
from pathlib import Path

__all__ = [
    "CleaningRules",
    "StopwordList",
    "StemRuleSet",
    "PipelineConfig",
    "normalize_unicode",
    "clean",
    "tokenize",
    "remove_stopwords",
    "stem",
    "preprocess",
    "load_stopwords",
    "load_suffixes",
    "default_stopwords",
    "default_stem_rules",
]

ZWNJ = "‌"
ZWJ = "‍"

# Bengali block minus its digits (U+09E6..U+09EF) and minus the currency /
# sign subrange (U+09F2..U+09FF): digit and symbol stripping should apply to
# Bengali numerals and the taka sign exactly as to their ASCII counterparts.
BENGALI_KEEP_RANGES: tuple[tuple[int, int], ...] = (
    (0x0980, 0x09E5),
    (0x09F0, 0x09F1),
)

# Range tables, not emoji enumeration; new emoji land inside these blocks.
_EMOJI_RANGES: tuple[tuple[int, int], ...] = (
    (0x1F000, 0x1F0FF),  # mahjong / dominoes / playing cards
    (0x1F1E6, 0x1F1FF),  # regional indicators
    (0x1F300, 0x1F5FF),  # misc symbols and pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport and map symbols
    (0x1F700, 0x1F77F),  # alchemical symbols
    (0x1F900, 0x1F9FF),  # supplemental symbols and pictographs
    (0x1FA00, 0x1FAFF),  # symbols and pictographs extended-A
    (0x2600, 0x26FF),    # miscellaneous symbols
    (0x2700, 0x27BF),    # dingbats
    (0xFE00, 0xFE0F),    # variation selectors (emoji presentation)
)

_LATIN_RANGES: tuple[tuple[int, int], ...] = (
    (0x0041, 0x005A),
    (0x0061, 0x007A),
    (0x00C0, 0x024F),  # Latin-1 supplement letters + extended A/B
)

_KEEP = 0
_SPACE = 1


def _in_ranges(cp: int, ranges: tuple[tuple[int, int], ...]) -> bool:
    return any(lo <= cp <= hi for lo, hi in ranges)


@dataclass(frozen=True)
class CleaningRules:
    """Total character policy: every codepoint maps to keep, drop, or space.

    ``keep_ranges`` are retained verbatim. Characters in an enabled strip
    class become a space (never bare removal, so adjoining words cannot fuse);
    disabling a class lets those characters through. Anything unclassified is
    treated as noise and becomes a space.
    """

    keep_ranges: tuple[tuple[int, int], ...] = BENGALI_KEEP_RANGES
    strip_punctuation: bool = True
    strip_symbols: bool = True
    strip_emoji: bool = True
    strip_latin: bool = True
    strip_digits: bool = True
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def is_kept(self, ch: str) -> bool:
        return _in_ranges(ord(ch), self.keep_ranges)

    def _classify(self, ch: str) -> str:
        cp = ord(ch)
        if _in_ranges(cp, _EMOJI_RANGES):
            return "emoji"
        cat = unicodedata.category(ch)
        if cat == "Nd" or ch.isdigit():
            return "digit"
        if cat.startswith("P"):
            return "punctuation"
        if cat.startswith("S"):
            return "symbol"
        if _in_ranges(cp, _LATIN_RANGES):
            return "latin"
        return "other"

    def action(self, ch: str) -> int:
        """Resolve one non-joiner character to ``_KEEP`` or ``_SPACE``."""
        got = self._cache.get(ch)
        if got is not None:
            return got
        if self.is_kept(ch):
            act = _KEEP
        elif ch.isspace():
            act = _SPACE
        else:
            cls = self._classify(ch)
            enabled = {
                "emoji": self.strip_emoji,
                "digit": self.strip_digits,
                "punctuation": self.strip_punctuation,
                "symbol": self.strip_symbols,
                "latin": self.strip_latin,
                "other": True,
            }[cls]
            act = _SPACE if enabled else _KEEP
        self._cache[ch] = act
        return act


@dataclass(frozen=True)
class StopwordList:
    """Normalized (NFC), unique stopword tokens plus where they came from."""

    words: frozenset[str]
    source: str = ""

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class StemRuleSet:
    """Strippable suffixes, longest first, with a minimum surviving stem length."""

    suffixes: tuple[str, ...]
    min_stem_length: int = 2
    source: str = ""

    def __post_init__(self):
        if any(not s for s in self.suffixes):
            raise ValueError("stem suffixes must be non-empty")
        if self.min_stem_length < 1:
            raise ValueError("min_stem_length must be positive")
        ordered = tuple(sorted(set(self.suffixes), key=lambda s: (-len(s), s)))
        object.__setattr__(self, "suffixes", ordered)


@dataclass(frozen=True)
class PipelineConfig:
    """Configuration for :func:`preprocess`; stage order is fixed."""

    rules: CleaningRules = field(default_factory=CleaningRules)
    stopwords: StopwordList = field(default_factory=lambda: default_stopwords())
    stemmer: StemRuleSet = field(default_factory=lambda: default_stem_rules())
    normalize: bool = True
    clean: bool = True
    drop_stopwords: bool = True
    stem: bool = True


def normalize_unicode(text: str) -> str:
    """Recompose text into canonical form (NFC); idempotent.

    Bengali has visually identical sequences that differ at the codepoint
    level (e.g. a base letter plus a combining nukta versus its precomposed
    letter); NFC makes them byte-identical before any other stage looks at
    them.
    """
    return unicodedata.normalize("NFC", text)


def clean(text: str, rules: CleaningRules | None = None) -> str:
    """Apply the character policy and collapse whitespace runs.

    Output contains only kept codepoints, single spaces, and joiners retained
    inside conjuncts; it never has leading/trailing spaces. Idempotent.
    """
    rules = rules or _default_rules()
    out: list[str] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in (ZWJ, ZWNJ):
            j = i
            while j < n and text[j] in (ZWJ, ZWNJ):
                j += 1
            # Joiner run survives only between two kept codepoints (a conjunct).
            if i > 0 and j < n and rules.is_kept(text[i - 1]) and rules.is_kept(text[j]):
                out.append(text[i:j])
            i = j
            continue
        if rules.action(ch) == _KEEP:
            out.append(ch)
        else:
            out.append(" ")
        i += 1
    return " ".join("".join(out).split())


def tokenize(text: str) -> list[str]:
    """Split cleaned text into maximal non-space runs, in order."""
    return text.split()


def remove_stopwords(tokens: list[str], stopwords: StopwordList) -> list[str]:
    """Keep the ordered subsequence of tokens that are not stopwords."""
    return [t for t in tokens if t not in stopwords]


def stem(token: str, rules: StemRuleSet) -> str:
    """Strip the longest suffix whose removal leaves at least the minimum stem.

    Suffixes are tried longest first; the first one that matches and leaves
    ``min_stem_length`` or more codepoints is stripped. No match (or every
    match cutting too deep) returns the token unchanged. Single application
    only; the pipeline never re-stems.
    """
    for sfx in rules.suffixes:
        if token.endswith(sfx) and len(token) - len(sfx) >= rules.min_stem_length:
            return token[: -len(sfx)]
    return token


def preprocess(raw: str, config: PipelineConfig | None = None) -> tuple[list[str], str]:
    """Run the full pipeline on one document.

    Returns the token list and the tokens rejoined with single spaces. Stages
    can be disabled via the config flags but never reordered.
    """
    config = config or _default_config()
    text = raw
    if config.normalize:
        text = normalize_unicode(text)
    if config.clean:
        text = clean(text, config.rules)
    tokens = tokenize(text)
    if config.drop_stopwords:
        tokens = remove_stopwords(tokens, config.stopwords)
    if config.stem:
        tokens = [stem(t, config.stemmer) for t in tokens]
    return tokens, " ".join(tokens)


def load_stopwords(path: str | Path) -> StopwordList:
    """Load a stopword file: UTF-8, one token per line, ``#`` comments allowed.

    Entries are NFC-normalized and de-duplicated on load.
    """
    path = Path(path)
    words = _parse_word_lines(path.read_text(encoding="utf-8"))
    return StopwordList(words=frozenset(words), source=str(path))


def load_suffixes(path: str | Path, min_stem_length: int = 2) -> StemRuleSet:
    """Load a suffix file (same line format as stopwords); order in the file
    does not matter, the rule set sorts by descending length."""
    path = Path(path)
    suffixes = _parse_word_lines(path.read_text(encoding="utf-8"))
    return StemRuleSet(
        suffixes=tuple(suffixes), min_stem_length=min_stem_length, source=str(path)
    )


def _parse_word_lines(blob: str) -> list[str]:
    words = []
    for line in blob.splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            words.append(unicodedata.normalize("NFC", entry))
    return words


@lru_cache(maxsize=1)
def default_stopwords() -> StopwordList:
    """The bundled Bengali stopword list."""
    blob = files("banglasent").joinpath("data/stopwords_bn.txt").read_text("utf-8")
    return StopwordList(words=frozenset(_parse_word_lines(blob)), source="<bundled>")


@lru_cache(maxsize=1)
def default_stem_rules() -> StemRuleSet:
    """The bundled Bengali suffix-stripping table."""
    blob = files("banglasent").joinpath("data/suffixes_bn.txt").read_text("utf-8")
    return StemRuleSet(
        suffixes=tuple(_parse_word_lines(blob)), min_stem_length=2, source="<bundled>"
    )


@lru_cache(maxsize=1)
def _default_rules() -> CleaningRules:
    return CleaningRules()


@lru_cache(maxsize=1)
def _default_config() -> PipelineConfig:
    return PipelineConfig()
