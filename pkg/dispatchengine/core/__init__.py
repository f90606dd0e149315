from .interface import (
    Speaker,
    FieldKind,
    FieldTier,
    SlotStatus,
    SessionStatus,
    ActionKind,
    HandoverReason,
    PatternCategory,
    PosTag,
    Utterance,
    DialogueContext,
    TypePrediction,
    ItemizationResult,
    SystemAction,
    ReportDelta,
    TurnOutcome,
    StochasticBinaryClassifier,
    StochasticExtractor,
    Embedder,
)
from .errors import (
    DispatchEngineError,
    ConfigError,
    BackendError,
    ItemizationError,
    UnknownLabelError,
    SessionStateError,
)

__all__ = [
    "Speaker",
    "FieldKind",
    "FieldTier",
    "SlotStatus",
    "SessionStatus",
    "ActionKind",
    "HandoverReason",
    "PatternCategory",
    "PosTag",
    "Utterance",
    "DialogueContext",
    "TypePrediction",
    "ItemizationResult",
    "SystemAction",
    "ReportDelta",
    "TurnOutcome",
    "StochasticBinaryClassifier",
    "StochasticExtractor",
    "Embedder",
    "DispatchEngineError",
    "ConfigError",
    "BackendError",
    "ItemizationError",
    "UnknownLabelError",
    "SessionStateError",
]
