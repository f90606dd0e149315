"""Cascaded incident type prediction.

One binary classifier layer per incident type, evaluated in cascade rank
order over the full caller context. Every layer runs; types identified by
earlier layers are passed to deeper layers as exclusions.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from dispatchengine.backends.base import call_with_retry
from dispatchengine.core.interface import (
    DialogueContext,
    StochasticBinaryClassifier,
    TypePrediction,
)
from dispatchengine.models.phone_tree import PhoneTree
from dispatchengine.models.policy import ConfidencePolicy

logger = logging.getLogger(__name__)

DECISION_THRESHOLD = 0.5


@dataclass(frozen=True)
class CascadeLayer:
    type_id: str
    rank: int
    classifier: StochasticBinaryClassifier


def build_layers(tree: PhoneTree, classifier: StochasticBinaryClassifier) -> List[CascadeLayer]:
    """One layer per incident type, ordered by cascade rank."""
    return [CascadeLayer(t.id, t.cascade_rank, classifier) for t in tree.ranked_types()]


def reduce_trials(label: str, probabilities: Sequence[float]) -> TypePrediction:
    """Modal decision and agreement fraction over trial probabilities.

    A tied vote is a negative decision.
    """
    if not probabilities:
        raise ValueError("no trial probabilities to reduce")
    probs = np.asarray(probabilities, dtype=float)
    n = len(probs)
    positive = int(np.count_nonzero(probs >= DECISION_THRESHOLD))
    decision = 2 * positive > n
    agreeing = positive if decision else n - positive
    return TypePrediction(
        type_id=label,
        decision=decision,
        confidence=agreeing / n,
        mean_probability=float(probs.mean()),
        support=positive / n,
    )


def run_trials(
    classifier: StochasticBinaryClassifier,
    text: str,
    label: str,
    policy: ConfidencePolicy,
    exclude: Sequence[str] = (),
) -> List[float]:
    """Classifier probabilities for trial seeds 1..T, in seed order."""
    probabilities = []
    for seed in policy.trial_seeds():
        p = call_with_retry(
            lambda: classifier.classify(text, label, seed, exclude),
            f"classify '{label}' trial {seed}",
        )
        probabilities.append(float(p))
    return probabilities


def predict_layer(
    context_text: str,
    layer: CascadeLayer,
    policy: ConfidencePolicy,
    exclude: Sequence[str] = (),
) -> TypePrediction:
    if not context_text.strip():
        raise ValueError("cannot predict incident types from an empty context")
    probabilities = run_trials(layer.classifier, context_text, layer.type_id, policy, exclude)
    return reduce_trials(layer.type_id, probabilities)


def predict_types(
    context: Union[DialogueContext, str],
    layers: Sequence[CascadeLayer],
    policy: ConfidencePolicy,
) -> List[TypePrediction]:
    """Evaluate every layer in rank order; returns one prediction per layer."""
    text = context.full_context() if isinstance(context, DialogueContext) else context
    identified: List[str] = []
    predictions = []
    for layer in sorted(layers, key=lambda l: l.rank):
        prediction = predict_layer(text, layer, policy, exclude=tuple(identified))
        if prediction.decision:
            identified.append(layer.type_id)
        predictions.append(prediction)
    logger.debug(f"Cascade positives: {identified}")
    return predictions
