"""Sentiment polarity pipeline for Bengali food reviews.

The package is organised as a small set of layers:

* :mod:`banglasent.corpus` loads labelled review CSVs and produces
  deterministic train/test splits.
* :mod:`banglasent.textprep` cleans, tokenizes, and stems Bengali text.
* :mod:`banglasent.features` turns token streams into count, tf-idf, or
  averaged-embedding feature matrices.
* :mod:`banglasent.models` holds the classifiers, all trained from scratch.
* :mod:`banglasent.evaluation` computes confusion matrices, threshold
  metrics, and ROC / precision-recall curves.
* :mod:`banglasent.cli` wires everything into the ``banglasent`` command.
"""

from banglasent.corpus import Corpus, CorpusError, LabeledReview, load_corpus, split
from banglasent.textprep import (
    CleaningRules,
    PipelineConfig,
    StemRuleSet,
    StopwordList,
    clean,
    default_stem_rules,
    default_stopwords,
    normalize_unicode,
    preprocess,
    stem,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "CorpusError",
    "LabeledReview",
    "load_corpus",
    "split",
    "CleaningRules",
    "PipelineConfig",
    "StemRuleSet",
    "StopwordList",
    "clean",
    "default_stem_rules",
    "default_stopwords",
    "normalize_unicode",
    "preprocess",
    "stem",
    "tokenize",
    "__version__",
]
