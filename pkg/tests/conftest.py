from __future__ import annotations

from pathlib import Path

import pytest

from zerotod.gateway import Backend, CompletionRequest, CompletionResult, FinishReason

FIXTURES = Path(__file__).parent / "fixtures"


class ScriptedBackend:
    """Test stub: answers from a tag->responses script and counts calls."""

    window_chars: int | None = None

    def __init__(self, script: dict[str, list[str]] | None = None, default: str = "ok") -> None:
        self.script = {k: list(v) for k, v in (script or {}).items()}
        self.default = default
        self.calls: list[CompletionRequest] = []

    def complete(self, request: CompletionRequest) -> CompletionResult:
        self.calls.append(request)
        queue = self.script.get(request.tag)
        text = queue.pop(0) if queue else self.default
        return CompletionResult(text=text, finish_reason=FinishReason.STOP, latency_ms=0)

    @property
    def call_count(self) -> int:
        return len(self.calls)


class RuleBasedLlm:
    """Deterministic cooperative stand-in for a live model.

    Emits a need statement from the last user line, DSL queries keyed off
    keywords in the action text, FULFILLED/NOT_FOUND extractions, and
    act-grounded responses. Used to record replayable transcripts.
    """

    window_chars: int | None = None

    FOODS = ("indian", "spanish", "korean", "chinese", "british")
    PRICES = ("cheap", "moderate", "expensive")
    AREAS = ("north", "south", "east", "west", "centre")

    def complete(self, request: CompletionRequest) -> CompletionResult:
        handler = getattr(self, f"_{request.tag}", None)
        text = handler(request.prompt) if handler else "ok"
        return CompletionResult(text=text, finish_reason=FinishReason.STOP, latency_ms=0)

    def _proxy_bs(self, prompt: str) -> str:
        user_lines = [l for l in prompt.splitlines() if l.startswith("USER: ")]
        need = user_lines[-1][len("USER: "):].rstrip("?.!").lower()
        return f"Information about {need}"

    def _action(self, prompt: str) -> str:
        return "Look for any further attribute matching the stated need."

    def _query(self, prompt: str) -> str:
        action = prompt.split("ACTION: ", 1)[1].splitlines()[0].lower()
        hotelish = any(w in action for w in ("hotel", "guesthouse", "lodging", "stay"))
        table = "hotel" if hotelish else "restaurant"
        preds = []
        if table == "restaurant":
            for food in self.FOODS:
                if food in action:
                    preds.append(f"food EQ {food}")
                    break
        else:
            if "guesthouse" in action:
                preds.append("type EQ guesthouse")
        for price in self.PRICES:
            if price in action:
                preds.append(f"pricerange EQ {price}")
                break
        for area in self.AREAS:
            if area in action:
                preds.append(f"area EQ {area}")
                break
        where = f" WHERE {' AND '.join(preds)}" if preds else ""
        return f"FROM {table}{where} LIMIT 3"

    def _extract(self, prompt: str) -> str:
        result_block = prompt.split("RESULT:\n", 1)[1].split("\n\nDecide", 1)[0]
        if "NO MATCHING ROWS" in result_block:
            return "NOT_FOUND"
        first = result_block.splitlines()[0]
        return f"FULFILLED: {first}"

    def _respond(self, prompt: str) -> str:
        act = [l for l in prompt.splitlines() if l.startswith("ACT: ")][-1][len("ACT: "):]
        return f"SYSTEM: Here is what I found: {act}"

    def _naive(self, prompt: str) -> str:
        return "SYSTEM: Happy to help with that."


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def read_golden(name: str) -> str:
    return (FIXTURES / "golden" / name).read_text(encoding="utf-8")
