from typing import Iterable, List, Optional


class DispatchEngineError(Exception):
    """Base class for all dispatch engine errors"""


class ConfigError(DispatchEngineError, ValueError):
    """A config document failed to load or validate.

    ``errors`` holds every violation found, not just the first one.
    """

    def __init__(self, message: str, errors: Optional[Iterable[str]] = None):
        self.errors: List[str] = list(errors) if errors is not None else [message]
        detail = "; ".join(self.errors)
        super().__init__(f"{message}: {detail}" if errors is not None else message)


class BackendError(DispatchEngineError, RuntimeError):
    """A model backend failed after its retry"""


class ItemizationError(BackendError):
    """One or more fields failed to itemize in a turn"""

    def __init__(self, failures: dict):
        self.failures = failures
        fields = ", ".join(sorted(failures))
        super().__init__(f"Itemization failed for fields: {fields}")


class UnknownLabelError(DispatchEngineError, KeyError):
    """A backend was asked about a type or field it has no config for"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown label"


class SessionStateError(DispatchEngineError, RuntimeError):
    """A session was stepped while not active, or concurrently"""
