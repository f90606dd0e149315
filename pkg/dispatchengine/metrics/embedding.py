from functools import lru_cache
from typing import Optional

import numpy as np
from sklearn.feature_extraction.text import HashingVectorizer

from dispatchengine.core.interface import Embedder
from dispatchengine.utils.text import content_words

DEFAULT_DIMENSION = 256


def _content_text(text: str) -> str:
    """Lowercased content words, or the raw lowercased text if none remain."""
    content = " ".join(content_words(text))
    if not content:
        content = " ".join(text.lower().split())
    if 0 < len(content) < 3:
        content = f" {content} "
    return content


class HashedTrigramEmbedder:
    """Character trigram counts of the content words, hashed and L2-normalized."""

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        self.dimension = dimension
        self._vectorizer = HashingVectorizer(
            analyzer="char",
            ngram_range=(3, 3),
            n_features=dimension,
            alternate_sign=False,
            norm="l2",
            preprocessor=_content_text,
        )
        self._embed_cached = lru_cache(maxsize=65536)(self._embed)

    def _embed(self, text: str) -> np.ndarray:
        return np.asarray(self._vectorizer.transform([text]).toarray()[0], dtype=float)

    def embed(self, text: str) -> np.ndarray:
        return self._embed_cached(text)


_default_embedder: Optional[HashedTrigramEmbedder] = None


def default_embedder() -> HashedTrigramEmbedder:
    global _default_embedder
    if _default_embedder is None:
        _default_embedder = HashedTrigramEmbedder()
    return _default_embedder


def semantic_similarity(a: str, b: str, embedder: Optional[Embedder] = None) -> float:
    """Cosine similarity of the two embeddings, clamped to [0, 1].

    A zero vector (empty text) scores the neutral 0.5 against anything.
    Identical non-empty strings score 1.0.
    """
    if a == b and a:
        return 1.0
    emb = embedder or default_embedder()
    u, v = emb.embed(a), emb.embed(b)
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.5
    cos = float(np.dot(u, v) / (nu * nv))
    return min(max(cos, 0.0), 1.0)
