"""Statistical single-document keyword extraction.

Candidates and scores come from ``yake``; lower scores mean more important
keywords. Each keyword is mapped back onto the source text and returned
with the casing and spacing of its first occurrence, so every segment is a
verbatim substring of its input.
"""

import logging
import re
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Set, Tuple

import yake

from dispatchengine.utils.text import STOPWORDS, content_words, words

logger = logging.getLogger(__name__)

DEFAULT_K = 5
MAX_NGRAM = 3
SOFT_MATCH_THRESHOLD = 0.5
MIN_CANDIDATES = 20


class Keyword(NamedTuple):
    segment: str
    score: float


KeywordList = List[Keyword]


@lru_cache(maxsize=16)
def _extractor(max_ngram: int, top: int) -> yake.KeywordExtractor:
    return yake.KeywordExtractor(lan="en", n=max_ngram, top=top, stopwords=set(STOPWORDS))


def _locate(text: str, keyword: str) -> Optional[str]:
    """First occurrence of ``keyword`` in ``text``, ignoring case."""
    parts = keyword.split()
    if not parts:
        return None
    pattern = re.escape(parts[0])
    for part in parts[1:]:
        # Clitics like 's come back as their own token.
        pattern += (r"\s*" if not part[0].isalnum() else r"\s+") + re.escape(part)
    match = re.search(rf"(?<!\w){pattern}(?!\w)", text, re.IGNORECASE)
    return match.group(0) if match else None


@lru_cache(maxsize=65536)
def _extract_cached(text: str, k: int, max_ngram: int) -> Tuple[Keyword, ...]:
    if not content_words(text):
        return ()
    ranked = _extractor(max_ngram, max(MIN_CANDIDATES, 4 * k)).extract_keywords(text)

    found: List[Keyword] = []
    seen: Set[str] = set()
    for keyword, score in sorted(ranked, key=lambda r: r[1]):
        segment = _locate(text, keyword)
        if segment is None:
            logger.debug(f"Dropping keyword '{keyword}' with no verbatim match")
            continue
        if segment.lower() in seen:
            continue
        seen.add(segment.lower())
        found.append(Keyword(segment, float(score)))
        if len(found) == k:
            break
    return tuple(found)


def extract_keywords(text: str, k: int = DEFAULT_K, max_ngram: int = MAX_NGRAM) -> KeywordList:
    """Top-``k`` keyword segments of ``text`` by ascending score.

    Text made only of stopwords yields an empty list.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    return list(_extract_cached(text, k, max_ngram))


def _token_set(segment: str) -> Set[str]:
    return set(words(segment))


def _soft_match(a: Set[str], b: Set[str]) -> bool:
    union = a | b
    return bool(union) and len(a & b) / len(union) >= SOFT_MATCH_THRESHOLD


def _max_matching(adjacency: List[List[int]], n_right: int) -> int:
    match_right = [-1] * n_right

    def augment(u: int, seen: List[bool]) -> bool:
        for v in adjacency[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    return sum(1 for u in range(len(adjacency)) if augment(u, [False] * n_right))


def keyword_overlap(a: Sequence[Keyword], b: Sequence[Keyword]) -> float:
    """Soft Jaccard between two keyword lists.

    Segments match when their lowercase token sets have Jaccard >= 0.5;
    each segment matches at most once. The result is
    ``matched / (len(a) + len(b) - matched)``; two empty lists give 1.0.
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    sets_a = [_token_set(kw.segment) for kw in a]
    sets_b = [_token_set(kw.segment) for kw in b]
    adjacency = [[j for j, sb in enumerate(sets_b) if _soft_match(sa, sb)] for sa in sets_a]
    matched = _max_matching(adjacency, len(sets_b))
    return matched / (len(a) + len(b) - matched)
