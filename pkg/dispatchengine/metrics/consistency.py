from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from dispatchengine.core.interface import Embedder
from dispatchengine.metrics.embedding import semantic_similarity
from dispatchengine.metrics.keywords import DEFAULT_K, extract_keywords, keyword_overlap

KEYWORD_WEIGHT = 0.2


@dataclass(frozen=True)
class ConsistencyScore:
    """Pairwise text consistency and its two components"""

    value: float
    keyword_overlap: float
    semantic_similarity: float


class ConsistencyMetric:
    """Weighted blend of keyword overlap and latent-space similarity.

    ``value = p * keyword_overlap + (1 - p) * semantic_similarity``.
    Scores are cached per unordered pair.
    """

    def __init__(
        self,
        keyword_weight: float = KEYWORD_WEIGHT,
        k: int = DEFAULT_K,
        embedder: Optional[Embedder] = None,
    ):
        if not 0.0 <= keyword_weight <= 1.0:
            raise ValueError("keyword_weight must be in [0, 1]")
        self.keyword_weight = keyword_weight
        self.k = k
        self.embedder = embedder
        self._score_cached = lru_cache(maxsize=65536)(self._score)

    def _score(self, a: str, b: str) -> ConsistencyScore:
        kw = keyword_overlap(extract_keywords(a, self.k), extract_keywords(b, self.k))
        sem = semantic_similarity(a, b, self.embedder)
        value = self.keyword_weight * kw + (1.0 - self.keyword_weight) * sem
        return ConsistencyScore(min(max(value, 0.0), 1.0), kw, sem)

    def score(self, a: str, b: str) -> ConsistencyScore:
        # Order the pair so (a, b) and (b, a) share one cache entry.
        return self._score_cached(*sorted((a, b)))

    def __call__(self, a: str, b: str) -> float:
        return self.score(a, b).value

    def mean_pairwise(self, outputs: Sequence[str]) -> float:
        """Mean score over all unordered pairs; fewer than two outputs give 1.0."""
        counts = Counter(outputs)
        n = sum(counts.values())
        if n < 2:
            return 1.0
        total = 0.0
        distinct = sorted(counts)
        for i, a in enumerate(distinct):
            ca = counts[a]
            total += ca * (ca - 1) / 2 * self(a, a)
            for b in distinct[i + 1 :]:
                total += ca * counts[b] * self(a, b)
        return total / (n * (n - 1) / 2)

    def medoid(self, outputs: Sequence[str]) -> Tuple[str, float]:
        """The output with the highest mean score to all other outputs.

        Ties go to the earliest output in trial order.
        """
        if not outputs:
            raise ValueError("medoid of an empty output list")
        if len(outputs) == 1:
            return outputs[0], 1.0
        counts = Counter(outputs)
        means: Dict[str, float] = {}
        for a in counts:
            others = sum(counts[b] * self(a, b) for b in counts if b != a)
            others += (counts[a] - 1) * self(a, a)
            means[a] = others / (len(outputs) - 1)
        best = max(outputs, key=lambda o: (means[o], -outputs.index(o)))
        return best, means[best]


_default_metric = ConsistencyMetric()


def pairwise_consistency(a: str, b: str, keyword_weight: float = KEYWORD_WEIGHT) -> ConsistencyScore:
    """Consistency of two texts under the default embedder."""
    if keyword_weight == KEYWORD_WEIGHT:
        return _default_metric.score(a, b)
    return ConsistencyMetric(keyword_weight=keyword_weight).score(a, b)


def mean_pairwise_consistency(outputs: Sequence[str]) -> float:
    return _default_metric.mean_pairwise(list(outputs))


__all__: List[str] = [
    "ConsistencyScore",
    "ConsistencyMetric",
    "pairwise_consistency",
    "mean_pairwise_consistency",
    "KEYWORD_WEIGHT",
]
