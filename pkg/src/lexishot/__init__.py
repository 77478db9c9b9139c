"""LexiShot: lexicon-driven tooling for hate speech corpora.

Subpackages cover the pipeline stages: lexicon modeling and statistics
(:mod:`lexishot.lexicon`), corpus loading (:mod:`lexishot.corpus`),
whole-word term matching (:mod:`lexishot.matching`), seeded shot sampling
and complementing (:mod:`lexishot.sampling`), keyword annotation and
representation-shift analysis (:mod:`lexishot.interp`), and evaluation
metrics (:mod:`lexishot.metrics`). The ``lexishot`` CLI exposes each stage
over files.
"""

from .corpus import Example, load_corpus
from .interp import (
    AnnotatedWordList,
    EmbeddingTable,
    ShiftReport,
    annotate_words,
    cosine,
    load_embedding_table,
    shift_report,
    word_vector,
)
from .lexicon import (
    Lexicon,
    LexiconStats,
    LexiconTerm,
    TermType,
    compute_stats,
    dump_lexicon,
    load_lexicon,
    validate_against_declared,
)
from .matching import MatchReport, TermMatch, classify_example, find_terms
from .metrics import (
    MetricSummary,
    PredictionRecord,
    aggregate_seeds,
    macro_scores,
    score_shot_set,
)
from .sampling import (
    ComplementKind,
    DistributionReport,
    SamplingConfig,
    SamplingMethod,
    ShotSet,
    complement,
    distribution_report,
    sample_lexicon_first,
    sample_random,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedWordList",
    "ComplementKind",
    "DistributionReport",
    "EmbeddingTable",
    "Example",
    "Lexicon",
    "LexiconStats",
    "LexiconTerm",
    "MatchReport",
    "MetricSummary",
    "PredictionRecord",
    "SamplingConfig",
    "SamplingMethod",
    "ShiftReport",
    "ShotSet",
    "TermMatch",
    "TermType",
    "aggregate_seeds",
    "annotate_words",
    "classify_example",
    "complement",
    "compute_stats",
    "cosine",
    "distribution_report",
    "dump_lexicon",
    "find_terms",
    "load_corpus",
    "load_embedding_table",
    "load_lexicon",
    "macro_scores",
    "sample_lexicon_first",
    "sample_random",
    "score_shot_set",
    "shift_report",
    "validate_against_declared",
    "word_vector",
]
