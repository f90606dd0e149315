"""The confidence-guided dialogue loop.

Per caller turn: handover check, incident type prediction over the full
context, itemization of the latest utterance, report update, then the next
system action (ask, clarify, hand over or close).
"""

import asyncio
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Set, Union

from dispatchengine.backends.api_backend import APIBackend
from dispatchengine.backends.stub_classifier import StubLexiconClassifier
from dispatchengine.backends.stub_extractor import StubPatternExtractor
from dispatchengine.core.cascade import CascadeLayer, build_layers, predict_types
from dispatchengine.core.errors import BackendError, ConfigError, SessionStateError
from dispatchengine.core.handover import HandoverControl
from dispatchengine.core.interface import (
    ActionKind,
    FieldKind,
    FieldTier,
    HandoverReason,
    ItemizationResult,
    ReportDelta,
    SessionStatus,
    SlotStatus,
    Speaker,
    StochasticBinaryClassifier,
    StochasticExtractor,
    SystemAction,
    TurnOutcome,
    TypePrediction,
)
from dispatchengine.core.itemize import itemize_turn
from dispatchengine.core.report import CaseReport
from dispatchengine.core.session import Session, new_session
from dispatchengine.metrics.consistency import ConsistencyMetric
from dispatchengine.models.config import load_stub_config
from dispatchengine.models.phone_tree import FieldSpec, PhoneTree, load_phone_tree
from dispatchengine.models.policy import ConfidencePolicy
from dispatchengine.utils.threadsafedict import ThreadSafeDict

logger = logging.getLogger(__name__)

CLOSING_TEXT = "Thank you. Your report is complete and an officer will follow up."
HANDOVER_TEXT = "Please hold while I transfer your call to a dispatcher."

_TIER_ORDER = {FieldTier.BASIC: 0, FieldTier.SHARED: 2, FieldTier.TYPE_SPECIFIC: 3}


def apply_predictions(
    report: CaseReport,
    tree: PhoneTree,
    predictions: Sequence[TypePrediction],
    policy: ConfidencePolicy,
    turn: int,
    delta: Optional[ReportDelta] = None,
) -> ReportDelta:
    """Confirm and demote incident types, then add or drop their slots."""
    delta = delta if delta is not None else ReportDelta()
    for pred in predictions:
        report.record_confidence(pred.type_id, turn, pred.support)
        confirmed = pred.type_id in report.confirmed_types
        if pred.decision and pred.confidence > policy.lambda2 and pred.mean_probability >= 0.5:
            if not confirmed:
                report.confirmed_types.add(pred.type_id)
                delta.types_added.append(pred.type_id)
                logger.debug(f"Turn {turn}: confirmed {pred.type_id} ({pred.confidence:.2f})")
        elif confirmed and (not pred.decision or pred.support <= policy.lambda2):
            report.confirmed_types.discard(pred.type_id)
            delta.types_removed.append(pred.type_id)
            logger.debug(f"Turn {turn}: demoted {pred.type_id} (support {pred.support:.2f})")

    applicable_ids = {
        spec.id for type_id in report.confirmed_types for spec in tree.fields_for_type(type_id)
    }
    for spec in tree.fields:
        if spec.universal:
            continue
        applicable = spec.id in applicable_ids
        slot = report.slot(spec.id)
        if applicable and slot is None:
            report.add_slot(spec)
            delta.slots[spec.id] = SlotStatus.EMPTY.value
        elif not applicable and slot is not None and not slot.answered:
            # Answered slots of a demoted type stay for audit.
            del report.slots[spec.id]
            delta.slots_dropped.append(spec.id)
    return delta


def apply_items(
    report: CaseReport,
    items: Sequence[ItemizationResult],
    policy: ConfidencePolicy,
    turn: int,
    delta: Optional[ReportDelta] = None,
) -> ReportDelta:
    """Write itemization results into their slots.

    conf_1 > lambda1 completes a slot; a lower-confidence value is kept as
    tentative and replaced by newer results. Absent results change nothing.
    """
    delta = delta if delta is not None else ReportDelta()
    for item in items:
        slot = report.slot(item.field_id)
        if slot is None or slot.status is SlotStatus.DONE or item.absent:
            continue
        slot.value = item.value
        slot.confidence = item.confidence
        slot.evidence = item.evidence
        slot.updated_turn = turn
        slot.status = SlotStatus.DONE if item.confidence > policy.lambda1 else SlotStatus.TENTATIVE
        delta.slots[item.field_id] = slot.status.value
    return delta


def update_report(
    report: CaseReport,
    tree: PhoneTree,
    items: Sequence[ItemizationResult],
    preds: Sequence[TypePrediction],
    policy: ConfidencePolicy,
    turn: int,
) -> ReportDelta:
    """Apply one turn's predictions and itemization results to ``report``."""
    delta = apply_predictions(report, tree, preds, policy, turn)
    return apply_items(report, items, policy, turn, delta)


def candidate_types(report: CaseReport, preds: Iterable[TypePrediction]) -> Set[str]:
    """Confirmed types plus any type with a positive decision at any confidence."""
    return set(report.confirmed_types) | {p.type_id for p in preds if p.decision}


def pending_fields(
    report: CaseReport,
    tree: PhoneTree,
    candidates: Optional[Set[str]] = None,
) -> List[FieldSpec]:
    """Non-done slots still relevant to the call, in asking order.

    Basic fields come first (opening questions in their configured order),
    then shared fields applicable to two or more candidate types, then the
    remaining shared fields, then type-specific fields. Ties keep phone-tree
    declaration order.
    """
    candidates = candidates if candidates is not None else set(report.confirmed_types)
    opening = {fid: i for i, fid in enumerate(tree.opening_questions)}
    declared = {spec.id: i for i, spec in enumerate(tree.fields)}

    def order(spec: FieldSpec) -> tuple:
        tier = _TIER_ORDER[spec.tier]
        if spec.tier is FieldTier.SHARED and len(spec.applies_to & candidates) >= 2:
            tier = 1
        return (tier, opening.get(spec.id, len(opening)), declared.get(spec.id, len(declared)))

    pending = [
        slot.spec
        for slot in report.slots.values()
        if slot.status is not SlotStatus.DONE
        and (slot.spec.universal or slot.spec.applies_to & report.confirmed_types)
    ]
    return sorted(pending, key=order)


def next_action(
    session: Session,
    items: Sequence[ItemizationResult],
    policy: ConfidencePolicy,
    preds: Sequence[TypePrediction] = (),
) -> SystemAction:
    """Clarify an unanswered question, ask the next pending field, or close.

    A clarification cap reached on the field just asked sets the session's
    exception flag and hands the call over.
    """
    pending = pending_fields(session.report, session.tree, candidate_types(session.report, preds))
    pending_ids = [spec.id for spec in pending]

    last = session.last_action
    if last is not None and last.kind in (ActionKind.ASK, ActionKind.CLARIFY):
        asked = last.field_id
        slot = session.report.slot(asked) if asked else None
        if slot is not None and asked in pending_ids:
            if slot.clarification_count < policy.clarification_cap:
                slot.clarification_count += 1
                return SystemAction.clarify(slot.field_id)
            session.handover_state = session.handover_state.with_exception()
            logger.info(f"Clarification cap reached on '{asked}'")
            return SystemAction.handover(HandoverReason.EXCEPTION)

    if not pending:
        return SystemAction.close()
    return SystemAction.ask(pending[0].id)


class DispatchEngine:
    """Runs dialogue sessions over shared, immutable configuration.

    Sessions are kept in a registry keyed by session id. Steps on one session
    never overlap; different sessions may be stepped from different threads.
    """

    def __init__(
        self,
        tree: PhoneTree,
        classifier: StochasticBinaryClassifier,
        extractor: StochasticExtractor,
        binary_classifier: Optional[StochasticBinaryClassifier] = None,
        policy: Optional[ConfidencePolicy] = None,
        handover: Optional[HandoverControl] = None,
        metric: Optional[ConsistencyMetric] = None,
    ):
        """Initialize the engine

        Args:
            tree: Validated phone tree
            classifier: Incident type classifier used by every cascade layer
            extractor: Narrative field extractor
            binary_classifier: Yes/no field classifier; defaults to ``classifier``
            policy: Confidence thresholds; defaults to ConfidencePolicy()
            handover: Handover patterns and lexicon; defaults to the shipped config
            metric: Consistency metric for narrative confidence
        """
        self.tree = tree
        self.policy = policy or ConfidencePolicy()
        self.handover = handover or HandoverControl.from_file()
        self.classifier = classifier
        self.binary_classifier = binary_classifier or classifier
        self.extractor = extractor
        self.metric = metric or ConsistencyMetric()
        self.layers: List[CascadeLayer] = build_layers(tree, classifier)
        self._sessions: ThreadSafeDict[str, Session] = ThreadSafeDict()

    @classmethod
    def from_files(
        cls,
        tree_path: Optional[Union[str, Path]] = None,
        handover_path: Optional[Union[str, Path]] = None,
        stubs_path: Optional[Union[str, Path]] = None,
        policy: Optional[ConfidencePolicy] = None,
        seed: Optional[int] = None,
        backend: str = "stub",
    ) -> "DispatchEngine":
        """Build an engine from config files, each falling back to its shipped default.

        Args:
            backend: "stub" for the lexicon/pattern stubs, "api" for the remote
                model service configured through environment variables
        """
        tree = load_phone_tree(tree_path)
        handover = HandoverControl.from_file(str(handover_path) if handover_path else None)
        if backend == "api":
            remote = APIBackend.from_env()
            logger.info(f"Using {remote}")
            return cls(tree, remote, remote, remote, policy=policy, handover=handover)
        if backend != "stub":
            raise ConfigError(f"Unknown backend '{backend}', expected 'stub' or 'api'")

        stubs = load_stub_config(stubs_path)
        if seed is not None:
            stubs = stubs.model_copy(update={"seed": seed})
        return cls(
            tree=tree,
            classifier=StubLexiconClassifier.for_incident_types(stubs),
            extractor=StubPatternExtractor.from_config(stubs),
            binary_classifier=StubLexiconClassifier.for_binary_fields(stubs),
            policy=policy,
            handover=handover,
        )

    def __str__(self) -> str:
        return (
            f"DispatchEngine(types={len(self.tree.incident_types)}, "
            f"fields={len(self.tree.fields)}, sessions={len(self._sessions)})"
        )

    def prompt_for(self, action: SystemAction) -> str:
        if action.kind is ActionKind.ASK and action.field_id:
            return self.tree.field(action.field_id).prompt
        if action.kind is ActionKind.CLARIFY and action.field_id:
            return f"{self.policy.clarification_prefix} {self.tree.field(action.field_id).prompt}"
        if action.kind is ActionKind.HANDOVER:
            return HANDOVER_TEXT
        return CLOSING_TEXT

    def start_session(self, session_id: Optional[str] = None) -> Session:
        """Create a session and ask the first opening question."""
        session = new_session(self.tree, self.policy, session_id)
        if session.session_id in self._sessions:
            raise SessionStateError(f"Session '{session.session_id}' already exists")
        self._sessions[session.session_id] = session
        if session.question_list:
            action = SystemAction.ask(session.question_list[0])
        else:
            action = next_action(session, [], self.policy)
        session.say(self.prompt_for(action), action)
        logger.info(f"Started session {session.session_id}: {action}")
        if action.kind is ActionKind.CLOSE:
            session.finish(SessionStatus.COMPLETE, "close")
        return session

    def get_session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(f"Unknown session '{session_id}'")
        return session

    def remove_session(self, session_id: str) -> None:
        del self._sessions[session_id]

    def session_ids(self) -> List[str]:
        return self._sessions.keys()

    def step(self, session: Union[Session, str], caller_text: str) -> TurnOutcome:
        """Process one caller utterance and decide the system's reply.

        Raises:
            SessionStateError: If the session is not active or is already
                being stepped by another thread
        """
        if isinstance(session, str):
            session = self.get_session(session)
        with self._sessions.key_lock(session.session_id, blocking=False) as acquired:
            if not acquired:
                raise SessionStateError(f"Session {session.session_id} is already being stepped")
            return self._step(session, caller_text)

    async def async_step(self, session: Union[Session, str], caller_text: str) -> TurnOutcome:
        """Step in a worker thread so the event loop is not blocked by model calls."""
        return await asyncio.to_thread(self.step, session, caller_text)

    def _step(self, session: Session, caller_text: str) -> TurnOutcome:
        if not session.active:
            raise SessionStateError(
                f"Session {session.session_id} is {session.status.value}, not active"
            )
        policy = self.policy
        utterance = session.context.append(Speaker.CALLER, caller_text)
        session.caller_turns += 1
        turn = session.caller_turns

        triggered, state, reason = self.handover.check(
            utterance, session.handover_state, policy.human_request_repeats
        )
        session.handover_state = state
        if triggered and reason is not None:
            session.record(utterance)
            return self._hand_over(session, reason)

        if turn > policy.turn_bound(len(self.tree.fields)):
            logger.warning(f"Session {session.session_id} exceeded its turn bound")
            session.handover_state = state.with_exception()
            session.record(utterance)
            return self._hand_over(session, HandoverReason.EXCEPTION)

        delta = ReportDelta()
        predictions: List[TypePrediction] = []
        try:
            predictions = predict_types(session.context, self.layers, policy)
            apply_predictions(session.report, self.tree, predictions, policy, turn, delta)
            items = itemize_turn(
                session.report,
                utterance,
                self._itemization_fields(session, predictions),
                self.extractor,
                self.binary_classifier,
                policy,
                self.metric,
            )
        except BackendError as e:
            logger.error(f"Session {session.session_id}: backend failure, handing over: {e}")
            session.handover_state = session.handover_state.with_exception()
            session.record(utterance)
            return self._hand_over(session, HandoverReason.EXCEPTION, delta, predictions)

        apply_items(session.report, items, policy, turn, delta)
        action = next_action(session, items, policy, predictions)
        session.record(utterance)

        if action.kind is ActionKind.HANDOVER and action.reason is not None:
            return self._hand_over(session, action.reason, delta, predictions, items)

        prompt = self.prompt_for(action)
        session.say(prompt, action)
        if action.kind is ActionKind.CLOSE:
            session.finish(SessionStatus.COMPLETE, "close")
        else:
            session.question_list = [
                spec.id
                for spec in pending_fields(
                    session.report, self.tree, candidate_types(session.report, predictions)
                )
            ]
        logger.debug(f"Session {session.session_id} turn {turn}: {action}")
        return TurnOutcome(action, delta, predictions, items, prompt)

    def _itemization_fields(
        self, session: Session, predictions: Sequence[TypePrediction]
    ) -> List[FieldSpec]:
        """Pending narrative fields, plus a binary field only when it was just asked."""
        asked = session.last_asked
        return [
            spec
            for spec in pending_fields(
                session.report, self.tree, candidate_types(session.report, predictions)
            )
            if spec.kind is FieldKind.NARRATIVE or spec.id == asked
        ]

    def _hand_over(
        self,
        session: Session,
        reason: HandoverReason,
        delta: Optional[ReportDelta] = None,
        predictions: Sequence[TypePrediction] = (),
        items: Sequence[ItemizationResult] = (),
    ) -> TurnOutcome:
        action = SystemAction.handover(reason)
        session.say(HANDOVER_TEXT, action)
        session.finish(SessionStatus.HANDED_OVER, f"handover:{reason.value}")
        return TurnOutcome(
            action, delta or ReportDelta(), list(predictions), list(items), HANDOVER_TEXT
        )

    def export_report(self, session_id: str) -> str:
        return self.get_session(session_id).report.to_json()

    def write_transcript(self, session_id: str, path: Union[str, Path]) -> None:
        self.get_session(session_id).write_transcript(path)
