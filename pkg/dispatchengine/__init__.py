from dispatchengine.core.interface import (
    StochasticBinaryClassifier,
    StochasticExtractor,
    Embedder,
    SystemAction,
    TurnOutcome,
    TypePrediction,
    ItemizationResult,
)
from dispatchengine.core.errors import (
    DispatchEngineError,
    ConfigError,
    BackendError,
    SessionStateError,
)

from dispatchengine.core.engine import DispatchEngine, update_report, next_action
from dispatchengine.core.handover import HandoverControl, HandoverState, is_trigger
from dispatchengine.core.cascade import predict_types
from dispatchengine.core.itemize import extract_field, answer_binary, itemize_turn
from dispatchengine.core.report import CaseReport, FieldSlot
from dispatchengine.core.session import Session

from dispatchengine.models.phone_tree import PhoneTree, load_phone_tree, validate_phone_tree
from dispatchengine.models.policy import ConfidencePolicy

from dispatchengine.backends import StubLexiconClassifier, StubPatternExtractor, APIBackend

from dispatchengine.metrics import ConsistencyMetric, pairwise_consistency, baseline_scores

from dispatchengine.utils import run_async_safely, get_secret_from_env

# Dynamically get version number
try:
    from importlib.metadata import version, PackageNotFoundError

    try:
        __version__ = version("dispatch-engine")
    except PackageNotFoundError:
        import os
        import tomli

        root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        pyproject_path = os.path.join(root_dir, "pyproject.toml")

        with open(pyproject_path, "rb") as f:
            pyproject_data = tomli.load(f)
            __version__ = pyproject_data["project"]["version"]
except (ImportError, FileNotFoundError, KeyError):
    __version__ = "0.1.0"

__all__ = [
    # Core Interfaces
    "StochasticBinaryClassifier",
    "StochasticExtractor",
    "Embedder",
    "SystemAction",
    "TurnOutcome",
    "TypePrediction",
    "ItemizationResult",
    # Errors
    "DispatchEngineError",
    "ConfigError",
    "BackendError",
    "SessionStateError",
    # Dialogue Engine
    "DispatchEngine",
    "update_report",
    "next_action",
    "HandoverControl",
    "HandoverState",
    "is_trigger",
    "predict_types",
    "extract_field",
    "answer_binary",
    "itemize_turn",
    "CaseReport",
    "FieldSlot",
    "Session",
    # Configuration
    "PhoneTree",
    "load_phone_tree",
    "validate_phone_tree",
    "ConfidencePolicy",
    # Backend Implementations
    "StubLexiconClassifier",
    "StubPatternExtractor",
    "APIBackend",
    # Metrics
    "ConsistencyMetric",
    "pairwise_consistency",
    "baseline_scores",
    # Utility Functions
    "run_async_safely",
    "get_secret_from_env",
    # Version Information
    "__version__",
]
