"""Digest-keyed response cache with an optional append-only file."""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from pathlib import Path


def cache_key(backend_id: str, request: object) -> str:
    canonical = json.dumps(
        {"backend": backend_id, "request": request},
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ResponseCache:
    """Maps request digests to response text.

    When ``path`` is given, entries are appended as JSON lines and replayed
    on construction, so an offline run can reuse a previous online one.
    ``max_entries`` bounds the in-memory table (LRU); the file is never
    rewritten.
    """

    def __init__(self, path: str | Path | None = None, max_entries: int | None = None):
        self.path = Path(path) if path else None
        self.max_entries = max_entries
        self._data: OrderedDict[str, str] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path and self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue  # torn final line from an interrupted write
                    self._insert(rec["key"], rec["response"])

    def _insert(self, key: str, value: str) -> None:
        self._data[key] = value
        self._data.move_to_end(key)
        if self.max_entries is not None:
            while len(self._data) > self.max_entries:
                self._data.popitem(last=False)

    def get(self, key: str) -> str | None:
        with self._lock:
            value = self._data.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
                self._data.move_to_end(key)
            return value

    def put(self, key: str, value: str) -> None:
        with self._lock:
            self._insert(key, value)
            if self.path:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"key": key, "response": value}, ensure_ascii=False) + "\n")

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: str) -> bool:
        return key in self._data
