import logging
from typing import Callable, Optional, TypeVar

from dispatchengine.core.errors import BackendError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def call_with_retry(fn: Callable[[], T], description: str, retries: int = 1) -> T:
    """Call a backend, retrying ``retries`` times before giving up.

    Raises:
        BackendError: When the last attempt fails too
    """
    for attempt in range(retries + 1):
        try:
            return fn()
        except Exception as e:
            if attempt < retries:
                logger.warning(f"{description} failed (attempt {attempt + 1}), retrying: {e}")
                continue
            logger.error(f"{description} failed after {attempt + 1} attempts: {e}")
            raise BackendError(f"{description} failed: {e}") from e
    raise BackendError(f"{description} failed")  # pragma: no cover


def ensure_verbatim(span: Optional[str], utterance: str, field_id: str = "") -> Optional[str]:
    """Drop extractor output that is not a verbatim substring of the utterance."""
    if span is None:
        return None
    if not span.strip() or span not in utterance:
        logger.warning(f"Discarding non-verbatim span for field '{field_id}': {span!r}")
        return None
    return span
