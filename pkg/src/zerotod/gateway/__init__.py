"""Uniform text-completion contract: live HTTP, deterministic replay, caching."""

from .base import (
    Backend,
    CompletionRequest,
    CompletionResult,
    ConcurrentReplayUse,
    ContextOverflow,
    FinishReason,
    GatewayError,
    GatewayTimeout,
    RateLimited,
    TranscriptMiss,
)
from .cache import CacheStore, CachingBackend, FileCacheStore, MemoryCacheStore, wrap_cache
from .live import LiveBackend
from .replay import MatchMode, ReplayBackend, ReplayTranscript, TranscriptEntry
from .transcript import RecordingBackend, record_transcript

__all__ = [
    "Backend",
    "CacheStore",
    "CachingBackend",
    "CompletionRequest",
    "CompletionResult",
    "ConcurrentReplayUse",
    "ContextOverflow",
    "FileCacheStore",
    "FinishReason",
    "GatewayError",
    "GatewayTimeout",
    "LiveBackend",
    "MatchMode",
    "MemoryCacheStore",
    "RateLimited",
    "RecordingBackend",
    "ReplayBackend",
    "ReplayTranscript",
    "TranscriptEntry",
    "TranscriptMiss",
    "record_transcript",
    "wrap_cache",
]
