import logging
from typing import Dict, List, Optional, Sequence

from dispatchengine.backends.base import call_with_retry, ensure_verbatim
from dispatchengine.core.cascade import reduce_trials, run_trials
from dispatchengine.core.errors import BackendError, ItemizationError
from dispatchengine.core.interface import (
    FieldKind,
    ItemizationResult,
    SlotStatus,
    StochasticBinaryClassifier,
    StochasticExtractor,
    Utterance,
)
from dispatchengine.core.report import CaseReport
from dispatchengine.metrics.consistency import ConsistencyMetric
from dispatchengine.models.phone_tree import FieldSpec
from dispatchengine.models.policy import ConfidencePolicy

logger = logging.getLogger(__name__)

_default_metric: Optional[ConsistencyMetric] = None


def _metric(metric: Optional[ConsistencyMetric]) -> ConsistencyMetric:
    global _default_metric
    if metric is not None:
        return metric
    if _default_metric is None:
        _default_metric = ConsistencyMetric()
    return _default_metric


def extract_field(
    field: FieldSpec,
    latest: Utterance,
    backend: StochasticExtractor,
    policy: ConfidencePolicy,
    metric: Optional[ConsistencyMetric] = None,
) -> ItemizationResult:
    """Quote the answer to a narrative field from the latest utterance.

    The value is the medoid of the non-absent trial outputs; confidence is
    their mean pairwise consistency. All trials absent gives an absent
    value with confidence 0.
    """
    if field.kind is not FieldKind.NARRATIVE:
        raise ValueError(f"extract_field needs a narrative field, got '{field.id}'")

    outputs: List[Optional[str]] = []
    for seed in policy.trial_seeds():
        span = call_with_retry(
            lambda: backend.extract(field.id, field.prompt, latest.text, seed),
            f"extract '{field.id}' trial {seed}",
        )
        outputs.append(ensure_verbatim(span, latest.text, field.id))

    present = [o for o in outputs if o is not None]
    if not present:
        return ItemizationResult(field.id, None, 0.0, trial_outputs=outputs)

    scorer = _metric(metric)
    value, _ = scorer.medoid(present)
    confidence = scorer.mean_pairwise(present)
    return ItemizationResult(field.id, value, confidence, trial_outputs=outputs)


def answer_binary(
    field: FieldSpec,
    latest: Utterance,
    backend: StochasticBinaryClassifier,
    policy: ConfidencePolicy,
) -> ItemizationResult:
    """Yes/no answer by modal vote over trials; never absent."""
    if field.kind is not FieldKind.BINARY:
        raise ValueError(f"answer_binary needs a binary field, got '{field.id}'")
    probabilities = run_trials(backend, latest.text, field.id, policy)
    vote = reduce_trials(field.id, probabilities)
    return ItemizationResult(
        field.id,
        vote.decision,
        vote.confidence,
        trial_outputs=probabilities,
        evidence=latest.text,
    )


def itemize_turn(
    report: CaseReport,
    latest: Utterance,
    pending_fields: Sequence[FieldSpec],
    extractor: StochasticExtractor,
    classifier: StochasticBinaryClassifier,
    policy: ConfidencePolicy,
    metric: Optional[ConsistencyMetric] = None,
) -> List[ItemizationResult]:
    """Try every pending field against the latest utterance.

    Raises:
        ItemizationError: After all fields were tried, if any backend failed
    """
    results: List[ItemizationResult] = []
    failures: Dict[str, BackendError] = {}
    for spec in pending_fields:
        slot = report.slot(spec.id)
        if slot is not None and slot.status is SlotStatus.DONE:
            logger.debug(f"Skipping done field '{spec.id}'")
            continue
        try:
            if spec.kind is FieldKind.BINARY:
                result = answer_binary(spec, latest, classifier, policy)
            else:
                result = extract_field(spec, latest, extractor, policy, metric)
        except BackendError as e:
            failures[spec.id] = e
            continue
        logger.debug(
            f"Itemized '{spec.id}': value={result.value!r} confidence={result.confidence:.3f}"
        )
        results.append(result)

    if failures:
        raise ItemizationError(failures)
    return results
