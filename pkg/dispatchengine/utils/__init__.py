from .utils import (
    run_async_safely,
    get_secret_from_env,
    derive_seed,
    seeded_uniform,
    default_data_path,
    resolve_config_path,
)
from .text import tokenize, words, content_words, stem, STOPWORDS
from .threadsafedict import ThreadSafeDict

__all__ = [
    "run_async_safely",
    "get_secret_from_env",
    "derive_seed",
    "seeded_uniform",
    "default_data_path",
    "resolve_config_path",
    "tokenize",
    "words",
    "content_words",
    "stem",
    "STOPWORDS",
    "ThreadSafeDict",
]
