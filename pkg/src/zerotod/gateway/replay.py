"""Deterministic replay backend answering from a recorded transcript."""

from __future__ import annotations

import json
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .base import (
    CompletionRequest,
    CompletionResult,
    ConcurrentReplayUse,
    FinishReason,
    TranscriptMiss,
)


class MatchMode(str, Enum):
    EXACT_PROMPT = "exact_prompt"
    HASH_PROMPT = "hash_prompt"
    TAG_SEQUENCE = "tag_sequence"


@dataclass(frozen=True)
class TranscriptEntry:
    key: str
    response: str
    tag: str = "default"


@dataclass
class ReplayTranscript:
    entries: list[TranscriptEntry] = field(default_factory=list)
    match_mode: MatchMode = MatchMode.EXACT_PROMPT

    def __post_init__(self) -> None:
        self.match_mode = MatchMode(self.match_mode)
        if self.match_mode is not MatchMode.TAG_SEQUENCE:
            keys = [e.key for e in self.entries]
            if len(keys) != len(set(keys)):
                raise ValueError(f"duplicate keys in {self.match_mode.value} transcript")

    def append(self, entry: TranscriptEntry) -> None:
        self.entries.append(entry)

    def dump(self, path: str | Path) -> None:
        """One JSON object per line: {"key", "tag", "response"}."""
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.entries:
                fh.write(json.dumps({"key": e.key, "tag": e.tag, "response": e.response}, ensure_ascii=False))
                fh.write("\n")

    @classmethod
    def load(cls, path: str | Path, match_mode: MatchMode = MatchMode.TAG_SEQUENCE) -> "ReplayTranscript":
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                entries.append(TranscriptEntry(key=obj["key"], response=obj["response"], tag=obj.get("tag", "default")))
        return cls(entries=entries, match_mode=match_mode)


class ReplayBackend:
    """Answers completions from a transcript; a pure function of (transcript, call sequence).

    TAG_SEQUENCE mode consumes entries in order per tag and is single-consumer:
    a cursor guard raises on concurrent use.
    """

    window_chars: int | None = None

    def __init__(self, transcript: ReplayTranscript) -> None:
        self._mode = transcript.match_mode
        self._by_key = {e.key: e for e in transcript.entries}
        self._queues: dict[str, deque[TranscriptEntry]] = {}
        for e in transcript.entries:
            self._queues.setdefault(e.tag, deque()).append(e)
        self._cursor_guard = threading.Lock()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        if self._mode is MatchMode.TAG_SEQUENCE:
            if not self._cursor_guard.acquire(blocking=False):
                raise ConcurrentReplayUse("tag-sequence replay is single-consumer")
            try:
                queue = self._queues.get(request.tag)
                if not queue:
                    raise TranscriptMiss(f"no remaining entry for tag {request.tag!r}")
                entry = queue.popleft()
            finally:
                self._cursor_guard.release()
        else:
            key = request.prompt if self._mode is MatchMode.EXACT_PROMPT else request.prompt_hash()
            entry = self._by_key.get(key)
            if entry is None:
                raise TranscriptMiss(f"no transcript entry for key {key[:80]!r}")
        return CompletionResult(text=entry.response, finish_reason=FinishReason.STOP, latency_ms=0)
