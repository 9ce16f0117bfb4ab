"""Completion request/result types and the backend protocol."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, runtime_checkable


class FinishReason(str, Enum):
    STOP = "stop"
    LENGTH = "length"
    ERROR = "error"


class GatewayError(Exception):
    """Base class for completion backend failures."""

    code = "GATEWAY_ERROR"


class GatewayTimeout(GatewayError):
    code = "TIMEOUT"


class RateLimited(GatewayError):
    code = "RATE_LIMITED"


class ContextOverflow(GatewayError):
    code = "CONTEXT_OVERFLOW"


class TranscriptMiss(GatewayError):
    code = "TRANSCRIPT_MISS"


class ConcurrentReplayUse(GatewayError):
    code = "CONCURRENT_REPLAY_USE"


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    max_tokens: int = 256
    temperature: float = 0.0
    stop_sequences: tuple[str, ...] = ()
    tag: str = "default"

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        object.__setattr__(self, "stop_sequences", tuple(self.stop_sequences))

    def cache_key(self) -> str:
        """Stable hash over every sampling parameter (tag is a label, not a parameter)."""
        payload = json.dumps(
            [self.prompt, self.max_tokens, self.temperature, list(self.stop_sequences)],
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def prompt_hash(self) -> str:
        return hashlib.sha256(self.prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CompletionResult:
    text: str
    finish_reason: FinishReason = FinishReason.STOP
    latency_ms: int = 0
    from_cache: bool = False

    def __post_init__(self) -> None:
        if self.latency_ms < 0:
            raise ValueError("latency_ms must be non-negative")
        if self.from_cache and self.latency_ms != 0:
            raise ValueError("cached results report zero latency")


@runtime_checkable
class Backend(Protocol):
    """Anything that can answer a CompletionRequest.

    window_chars is the prompt-size budget in characters (None = unbounded);
    backends raise ContextOverflow for prompts that exceed it.
    """

    window_chars: int | None

    def complete(self, request: CompletionRequest) -> CompletionResult: ...
