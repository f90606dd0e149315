from abc import abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Protocol,
    Sequence,
    Union,
    runtime_checkable,
)

import numpy as np


class Speaker(Enum):
    """Who produced an utterance"""

    CALLER = "caller"
    SYSTEM = "system"


class FieldKind(Enum):
    """How a report field is answered"""

    NARRATIVE = "narrative"  # Verbatim quote from the caller
    BINARY = "binary"  # Yes/no


class FieldTier(Enum):
    """Generality of a report field"""

    BASIC = "basic"  # Asked on every call
    SHARED = "shared"  # Common to several incident types
    TYPE_SPECIFIC = "type_specific"


class SlotStatus(Enum):
    EMPTY = "empty"
    TENTATIVE = "tentative"  # Value present but confidence <= lambda1
    DONE = "done"


class SessionStatus(Enum):
    ACTIVE = "active"
    HANDED_OVER = "handed_over"
    COMPLETE = "complete"


class ActionKind(Enum):
    ASK = "ask"
    CLARIFY = "clarify"
    HANDOVER = "handover"
    CLOSE = "close"


class HandoverReason(Enum):
    URGENCY = "urgency"
    HUMAN_REQUEST = "human_request"
    EXCEPTION = "exception"


class PatternCategory(Enum):
    HUMAN_REQUEST = "human_request"
    URGENCY = "urgency"


class PosTag(Enum):
    """Coarse part-of-speech tags used by handover patterns"""

    NP = "NP"
    VP = "VP"
    PRP = "PRP"
    ADJP = "ADJP"
    PP = "PP"
    BE = "BE"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Utterance:
    """One turn of the dialogue"""

    speaker: Speaker
    text: str
    turn_index: int  # Strictly increasing within a session

    def __post_init__(self) -> None:
        if self.turn_index < 0:
            raise ValueError("turn_index must be non-negative")
        if self.speaker is Speaker.CALLER and not self.text.strip():
            raise ValueError("Caller utterance text must not be blank")


@dataclass
class DialogueContext:
    """Ordered caller and system utterances of a session"""

    utterances: List[Utterance] = field(default_factory=list)

    def append(self, speaker: Speaker, text: str) -> Utterance:
        turn = self.utterances[-1].turn_index + 1 if self.utterances else 0
        utterance = Utterance(speaker=speaker, text=text, turn_index=turn)
        self.utterances.append(utterance)
        return utterance

    def caller_utterances(self) -> List[Utterance]:
        return [u for u in self.utterances if u.speaker is Speaker.CALLER]

    def full_context(self) -> str:
        """All caller utterances joined in order; input to type prediction."""
        return " ".join(u.text for u in self.caller_utterances())

    def latest(self) -> Optional[Utterance]:
        """The final caller utterance; input to itemization."""
        callers = self.caller_utterances()
        return callers[-1] if callers else None


@dataclass(frozen=True)
class TypePrediction:
    """Result of one cascade layer"""

    type_id: str
    decision: bool  # Modal trial decision
    confidence: float  # Fraction of trials agreeing with the mode
    mean_probability: float
    support: float  # Fraction of trials voting positive (conf_2 in curves)


@dataclass(frozen=True)
class ItemizationResult:
    """One field's answer from the latest utterance"""

    field_id: str
    value: Optional[Union[str, bool]]
    confidence: float
    trial_outputs: List[Any] = field(default_factory=list)
    evidence: Optional[str] = None  # Supporting quote for binary answers

    @property
    def absent(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class SystemAction:
    """What the system does after a caller turn"""

    kind: ActionKind
    field_id: Optional[str] = None
    reason: Optional[HandoverReason] = None

    def __str__(self) -> str:
        if self.kind in (ActionKind.ASK, ActionKind.CLARIFY):
            return f"{self.kind.value}({self.field_id})"
        if self.kind is ActionKind.HANDOVER and self.reason is not None:
            return f"handover({self.reason.value})"
        return self.kind.value

    @classmethod
    def ask(cls, field_id: str) -> "SystemAction":
        return cls(ActionKind.ASK, field_id=field_id)

    @classmethod
    def clarify(cls, field_id: str) -> "SystemAction":
        return cls(ActionKind.CLARIFY, field_id=field_id)

    @classmethod
    def handover(cls, reason: HandoverReason) -> "SystemAction":
        return cls(ActionKind.HANDOVER, reason=reason)

    @classmethod
    def close(cls) -> "SystemAction":
        return cls(ActionKind.CLOSE)


@dataclass
class ReportDelta:
    """Summary of what one turn changed in the report"""

    slots: Dict[str, str] = field(default_factory=dict)  # field id -> new status
    types_added: List[str] = field(default_factory=list)
    types_removed: List[str] = field(default_factory=list)
    slots_dropped: List[str] = field(default_factory=list)


@dataclass
class TurnOutcome:
    """Result of one engine step; exactly one action per caller utterance"""

    system_action: SystemAction
    report_delta: ReportDelta = field(default_factory=ReportDelta)
    predictions: List[TypePrediction] = field(default_factory=list)
    items: List[ItemizationResult] = field(default_factory=list)
    prompt: Optional[str] = None  # Question text when the action asks or clarifies


@runtime_checkable
class StochasticBinaryClassifier(Protocol):
    """Binary classifier whose trials vary with an explicit seed"""

    @abstractmethod
    def classify(
        self,
        text: str,
        label: str,
        trial_seed: int,
        exclude: Sequence[str] = (),
    ) -> float:
        """Probability that ``label`` applies to ``text``.

        Args:
            text: Input text (full context for incident types, latest
                utterance for binary fields)
            label: Incident type id or binary field id
            trial_seed: Seed of this trial; a fixed (text, seed) pair gives a
                fixed probability
            exclude: Labels already identified by earlier cascade layers

        Returns:
            float: probability in [0, 1]

        Raises:
            UnknownLabelError: If the backend has no config for ``label``
        """
        ...


@runtime_checkable
class StochasticExtractor(Protocol):
    """Extractive question answering whose trials vary with an explicit seed"""

    @abstractmethod
    def extract(
        self, field_id: str, question: str, utterance: str, trial_seed: int
    ) -> Optional[str]:
        """Quote the part of ``utterance`` answering ``question``.

        Returns:
            Optional[str]: a verbatim substring of ``utterance``, or None
        """
        ...


@runtime_checkable
class Embedder(Protocol):
    """Maps text into a latent vector space"""

    def embed(self, text: str) -> np.ndarray:
        ...
