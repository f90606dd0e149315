import threading
from contextlib import contextmanager
from typing import Dict, Generic, Iterator, List, Optional, Tuple, TypeVar

K = TypeVar("K")
V = TypeVar("V")


class ThreadSafeDict(Generic[K, V]):
    """
    Dictionary guarded by a re-entrant lock, with one extra lock per key.

    - Container accessors (keys/values/items) return list copies, so callers
      never iterate while another thread mutates.
    - ``key_lock`` hands out a per-key ``threading.Lock`` so long operations
      on different keys do not contend with each other.
    """

    def __init__(self) -> None:
        self._dict: Dict[K, V] = {}
        self._sync_lock = threading.RLock()
        self._key_locks: Dict[K, threading.Lock] = {}

    def __getitem__(self, key: K) -> V:
        with self._sync_lock:
            return self._dict[key]

    def __setitem__(self, key: K, value: V) -> None:
        with self._sync_lock:
            self._dict[key] = value

    def __delitem__(self, key: K) -> None:
        with self._sync_lock:
            del self._dict[key]
            self._key_locks.pop(key, None)

    def __contains__(self, key: object) -> bool:
        with self._sync_lock:
            return key in self._dict

    def __len__(self) -> int:
        with self._sync_lock:
            return len(self._dict)

    def get(self, key: K, default: Optional[V] = None) -> Optional[V]:
        with self._sync_lock:
            return self._dict.get(key, default)

    def setdefault(self, key: K, value: V) -> V:
        with self._sync_lock:
            return self._dict.setdefault(key, value)

    def keys(self) -> List[K]:
        with self._sync_lock:
            return list(self._dict.keys())

    def values(self) -> List[V]:
        with self._sync_lock:
            return list(self._dict.values())

    def items(self) -> List[Tuple[K, V]]:
        with self._sync_lock:
            return list(self._dict.items())

    def _get_key_lock(self, key: K) -> threading.Lock:
        with self._sync_lock:
            if key not in self._key_locks:
                self._key_locks[key] = threading.Lock()
            return self._key_locks[key]

    @contextmanager
    def key_lock(self, key: K, blocking: bool = True) -> Iterator[bool]:
        """Hold the lock of ``key``; yields False if ``blocking`` is off and it is taken."""
        lock = self._get_key_lock(key)
        acquired = lock.acquire(blocking)
        try:
            yield acquired
        finally:
            if acquired:
                lock.release()
