from .base import call_with_retry, ensure_verbatim
from .stub_classifier import StubLexiconClassifier
from .stub_extractor import StubPatternExtractor
from .api_backend import APIBackend

__all__ = [
    "call_with_retry",
    "ensure_verbatim",
    "StubLexiconClassifier",
    "StubPatternExtractor",
    "APIBackend",
]
