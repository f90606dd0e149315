from .keywords import Keyword, KeywordList, extract_keywords, keyword_overlap
from .embedding import HashedTrigramEmbedder, default_embedder, semantic_similarity
from .consistency import (
    KEYWORD_WEIGHT,
    ConsistencyMetric,
    ConsistencyScore,
    mean_pairwise_consistency,
    pairwise_consistency,
)
from .baselines import baseline_scores, bleu_bigram, dld_similarity, rouge1_f
from .validation import (
    MetricPair,
    format_validation_table,
    is_monotone,
    load_metric_corpus,
    run_metric_validation,
    validation_table_json,
)

__all__ = [
    # Keywords
    "Keyword",
    "KeywordList",
    "extract_keywords",
    "keyword_overlap",
    # Embedding
    "HashedTrigramEmbedder",
    "default_embedder",
    "semantic_similarity",
    # Consistency
    "KEYWORD_WEIGHT",
    "ConsistencyMetric",
    "ConsistencyScore",
    "pairwise_consistency",
    "mean_pairwise_consistency",
    # Baselines
    "baseline_scores",
    "bleu_bigram",
    "dld_similarity",
    "rouge1_f",
    # Validation harness
    "MetricPair",
    "load_metric_corpus",
    "run_metric_validation",
    "format_validation_table",
    "validation_table_json",
    "is_monotone",
]
