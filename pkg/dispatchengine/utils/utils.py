import asyncio
import hashlib
import logging
import os
from importlib import resources
from pathlib import Path
from typing import Any, Awaitable, Optional, Union

from pydantic import SecretStr

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = "DISPATCH_ENGINE_CONFIG_DIR"
_DATA_PACKAGE = "dispatchengine.data"
_SEED_MASK = (1 << 63) - 1


def run_async_safely(coro: Awaitable[Any]) -> Any:
    """
    Safely run async coroutines in synchronous environment
    Will raise RuntimeError if called in async environment
    """
    try:
        loop = asyncio.get_running_loop()
    except RuntimeError:  # No running event loop
        loop = None

    if loop is not None:
        raise RuntimeError(
            "Detected running event loop! "
            "Await the async_* method directly instead of calling its sync wrapper."
        )

    loop = asyncio.new_event_loop()
    try:
        return loop.run_until_complete(coro)
    finally:
        loop.close()


def get_secret_from_env(
    key: Union[str, list, tuple],
    default: Optional[str] = None,
) -> Optional[SecretStr]:
    """Get a secret from the first environment variable in ``key`` that is set."""
    keys = [key] if isinstance(key, str) else list(key)
    for k in keys:
        if k in os.environ:
            return SecretStr(os.environ[k])
    if default is None:
        return None
    return SecretStr(default)


def derive_seed(base_seed: int, *keys: Any) -> int:
    """Counter-based seed splitter.

    Hashes ``base_seed`` together with ``keys`` (labels, texts, counters)
    into a 63-bit integer. The same inputs always give the same seed,
    independent of process hash randomization.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(base_seed).encode("utf-8"))
    for key in keys:
        h.update(b"\x1f")
        h.update(str(key).encode("utf-8"))
    return int.from_bytes(h.digest(), "big") & _SEED_MASK


def seeded_uniform(base_seed: int, *keys: Any) -> float:
    """Deterministic draw in [0, 1) keyed like ``derive_seed``."""
    return derive_seed(base_seed, *keys) / float(1 << 63)


def default_data_path(name: str) -> Path:
    """Path to a packaged default data file."""
    return Path(str(resources.files(_DATA_PACKAGE).joinpath(name)))


def resolve_config_path(explicit: Optional[Union[str, Path]], default_name: str) -> Path:
    """Resolve a config file: explicit path, then the config dir env var, then package data."""
    if explicit:
        return Path(explicit)
    config_dir = os.environ.get(CONFIG_DIR_ENV)
    if config_dir:
        candidate = Path(config_dir) / default_name
        if candidate.is_file():
            logger.debug(f"Using {default_name} from {CONFIG_DIR_ENV}: {candidate}")
            return candidate
    return default_data_path(default_name)
