import json
import time
from threading import Lock
from typing import Any, Dict, Optional, Tuple

from ..config import get_settings
from ..schemas import ExperimentConfig


def run_key(command: str, config: ExperimentConfig) -> str:
    """Stable key for a run: the command plus the canonical JSON of its config."""
    body = config.model_dump(mode="json", by_alias=True, exclude={"out", "workers"})
    return f"{command}:{json.dumps(body, sort_keys=True)}"


class InMemoryCache:
    def __init__(self, ttl_seconds: Optional[int] = None):
        self.ttl = ttl_seconds if ttl_seconds is not None else get_settings().cache_ttl_seconds
        self.store: Dict[str, Tuple[float, Any]] = {}
        self._lock = Lock()

    def get(self, key: str):
        with self._lock:
            entry = self.store.get(key)
            if not entry:
                return None
            expires_at, value = entry
            if time.time() > expires_at:
                self.store.pop(key, None)
                return None
            return value

    def set(self, key: str, value: Any):
        with self._lock:
            self.store[key] = (time.time() + self.ttl, value)

    def clear(self) -> None:
        with self._lock:
            self.store.clear()
