from .phone_tree import (
    IncidentType,
    FieldSpec,
    PhoneTree,
    validate_phone_tree,
    load_phone_tree,
)
from .policy import ConfidencePolicy
from .config import (
    PatternElement,
    Pattern,
    HandoverConfig,
    ExtractionRule,
    BinaryCues,
    StubConfig,
    load_handover_config,
    load_stub_config,
)
from .api_model import InferenceRequest, InferenceResponse

__all__ = [
    "IncidentType",
    "FieldSpec",
    "PhoneTree",
    "validate_phone_tree",
    "load_phone_tree",
    "ConfidencePolicy",
    "PatternElement",
    "Pattern",
    "HandoverConfig",
    "ExtractionRule",
    "BinaryCues",
    "StubConfig",
    "load_handover_config",
    "load_stub_config",
    "InferenceRequest",
    "InferenceResponse",
]
