"""Classical string-similarity baselines compared against the consistency metric."""

from functools import lru_cache
from typing import Dict

import nltk
from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu
from rouge_score import rouge_scorer

from dispatchengine.utils.text import words

_smoothing = SmoothingFunction().method1


def bleu_bigram(candidate: str, reference: str) -> float:
    """Sentence BLEU of ``candidate`` against ``reference`` with uniform
    unigram/bigram weights and brevity penalty.

    Texts shorter than two tokens fall back to unigram precision.
    """
    if candidate == reference:
        return 1.0
    hyp, ref = words(candidate), words(reference)
    if not ref or not hyp:
        return 0.0
    weights = (1.0,) if min(len(ref), len(hyp)) < 2 else (0.5, 0.5)
    return float(sentence_bleu([ref], hyp, weights=weights, smoothing_function=_smoothing))


def dld_similarity(a: str, b: str) -> float:
    """``1 - DamerauLevenshtein(a, b) / max(len(a), len(b))`` on characters."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - nltk.edit_distance(a, b, transpositions=True) / longest


@lru_cache(maxsize=1)
def _rouge() -> rouge_scorer.RougeScorer:
    return rouge_scorer.RougeScorer(["rouge1"])


def rouge1_f(reference: str, hypothesis: str) -> float:
    if reference == hypothesis:
        return 1.0
    return float(_rouge().score(reference, hypothesis)["rouge1"].fmeasure)


BASELINES = {
    "bleu": bleu_bigram,
    "dld": dld_similarity,
    "rouge1": rouge1_f,
}


def baseline_scores(a: str, b: str) -> Dict[str, float]:
    return {name: fn(a, b) for name, fn in BASELINES.items()}
