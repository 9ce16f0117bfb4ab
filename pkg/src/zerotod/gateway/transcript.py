"""Recording wrapper: every completion through it lands in a replayable transcript."""

from __future__ import annotations

import threading

from .base import Backend, CompletionRequest, CompletionResult
from .replay import MatchMode, ReplayTranscript, TranscriptEntry


class RecordingBackend:
    def __init__(self, inner: Backend, transcript: ReplayTranscript) -> None:
        self._inner = inner
        self._transcript = transcript
        self._lock = threading.Lock()

    @property
    def window_chars(self) -> int | None:
        return self._inner.window_chars

    @property
    def transcript(self) -> ReplayTranscript:
        return self._transcript

    def complete(self, request: CompletionRequest) -> CompletionResult:
        result = self._inner.complete(request)
        entry = TranscriptEntry(key=request.prompt_hash(), response=result.text, tag=request.tag)
        with self._lock:
            self._transcript.append(entry)
        return result


def record_transcript(inner: Backend) -> tuple[RecordingBackend, ReplayTranscript]:
    """Wrap a backend so every completion is appended, in issue order, to a transcript.

    Entries are keyed by prompt hash, so the transcript replays in either
    HASH_PROMPT or TAG_SEQUENCE mode.
    """
    transcript = ReplayTranscript(entries=[], match_mode=MatchMode.TAG_SEQUENCE)
    return RecordingBackend(inner, transcript), transcript
