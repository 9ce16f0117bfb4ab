"""Caching wrapper and cache stores (in-memory and file-backed)."""

from __future__ import annotations

import json
import threading
import warnings
from pathlib import Path
from typing import Protocol

from .base import Backend, CompletionRequest, CompletionResult, FinishReason


class CacheStore(Protocol):
    def get(self, key: str) -> dict | None: ...

    def put(self, key: str, value: dict) -> None: ...


class MemoryCacheStore:
    def __init__(self) -> None:
        self._data: dict[str, dict] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> dict | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: str, value: dict) -> None:
        with self._lock:
            self._data[key] = value


class FileCacheStore:
    """Append-only JSONL store; entries survive process restarts.

    Writes are serialized by an internal lock. Later entries for the same key
    win on reload (harmless: values are deterministic per key).
    """

    def __init__(self, path: str | Path) -> None:
        self._path = Path(path)
        self._lock = threading.Lock()
        self._data: dict[str, dict] = {}
        if self._path.exists():
            with open(self._path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    obj = json.loads(line)
                    self._data[obj["key"]] = obj["value"]

    def get(self, key: str) -> dict | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: str, value: dict) -> None:
        with self._lock:
            self._data[key] = value
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps({"key": key, "value": value}, ensure_ascii=False))
                fh.write("\n")
                fh.flush()


class CachingBackend:
    """Cache hit bypasses the inner backend; store failures degrade to pass-through."""

    def __init__(self, inner: Backend, store: CacheStore) -> None:
        self._inner = inner
        self._store = store

    @property
    def window_chars(self) -> int | None:
        return self._inner.window_chars

    def complete(self, request: CompletionRequest) -> CompletionResult:
        key = request.cache_key()
        try:
            hit = self._store.get(key)
        except OSError as exc:
            warnings.warn(f"cache store read failed, passing through: {exc}", stacklevel=2)
            hit = None
        if hit is not None:
            return CompletionResult(
                text=hit["text"],
                finish_reason=FinishReason(hit.get("finish_reason", "stop")),
                latency_ms=0,
                from_cache=True,
            )
        result = self._inner.complete(request)
        try:
            self._store.put(key, {"text": result.text, "finish_reason": result.finish_reason.value})
        except OSError as exc:
            warnings.warn(f"cache store write failed, passing through: {exc}", stacklevel=2)
        return result


def wrap_cache(inner: Backend, store: CacheStore) -> CachingBackend:
    return CachingBackend(inner, store)
