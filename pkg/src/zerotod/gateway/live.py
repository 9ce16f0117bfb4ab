"""Live backend speaking the OpenAI-compatible chat-completions HTTP protocol."""

from __future__ import annotations

import os
import random
import time

import httpx

from .base import (
    CompletionRequest,
    CompletionResult,
    ContextOverflow,
    FinishReason,
    GatewayError,
    GatewayTimeout,
    RateLimited,
)

RETRYABLE_STATUS = {408, 429, 500, 502, 503, 504}
_OVERFLOW_MARKERS = ("context_length_exceeded", "maximum context length", "context window")


class LiveBackend:
    """Chat-completion client with exponential-backoff retry on transient failures.

    Context overflow is never retried. The API key is read from ``key_env``
    unless ``api_key`` is given explicitly.
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str | None = None,
        key_env: str = "OPENAI_API_KEY",
        timeout_s: float = 60.0,
        max_retries: int = 4,
        window_chars: int | None = 48000,
        backoff_base_s: float = 0.5,
        backoff_cap_s: float = 30.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
        rng: random.Random | None = None,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._api_key = api_key if api_key is not None else os.environ.get(key_env, "")
        self.max_retries = max_retries
        self.window_chars = window_chars
        self._backoff_base_s = backoff_base_s
        self._backoff_cap_s = backoff_cap_s
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._client = httpx.Client(timeout=timeout_s, transport=transport)

    def close(self) -> None:
        self._client.close()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        if self.window_chars is not None and len(request.prompt) > self.window_chars:
            raise ContextOverflow(
                f"prompt of {len(request.prompt)} chars exceeds window of {self.window_chars}"
            )
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.stop_sequences:
            payload["stop"] = list(request.stop_sequences)
        headers = {"Authorization": f"Bearer {self._api_key}"}
        url = f"{self.base_url}/chat/completions"

        start = time.monotonic()
        last_error: GatewayError | None = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = self._client.post(url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                last_error = GatewayTimeout(str(exc))
            except httpx.HTTPError as exc:
                last_error = GatewayError(f"transport failure: {exc}")
            else:
                if resp.status_code == 200:
                    return self._parse_response(resp, start)
                body = resp.text[:500]
                if any(marker in body for marker in _OVERFLOW_MARKERS):
                    raise ContextOverflow(f"HTTP {resp.status_code}: {body}")
                if resp.status_code == 429:
                    last_error = RateLimited(f"HTTP 429: {body}")
                elif resp.status_code in RETRYABLE_STATUS:
                    last_error = GatewayError(f"HTTP {resp.status_code}: {body}")
                else:
                    raise GatewayError(f"HTTP {resp.status_code}: {body}")
            if attempt < self.max_retries:
                base = min(self._backoff_base_s * (2**attempt), self._backoff_cap_s)
                self._sleep(self._rng.uniform(0, base))
        assert last_error is not None
        raise last_error

    def _parse_response(self, resp: httpx.Response, start: float) -> CompletionResult:
        data = resp.json()
        try:
            choice = data["choices"][0]
            text = choice["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed completion body: {exc}") from exc
        reason = {
            "stop": FinishReason.STOP,
            "length": FinishReason.LENGTH,
        }.get(choice.get("finish_reason", "stop"), FinishReason.ERROR)
        latency_ms = int((time.monotonic() - start) * 1000)
        return CompletionResult(text=text or "", finish_reason=reason, latency_ms=latency_ms)
