"""Turn-level record of every pipeline artifact, serializable for replay checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class StepVerdict(str, Enum):
    FULFILLED = "FULFILLED"
    CONTINUE = "CONTINUE"
    NOT_FOUND = "NOT_FOUND"


class OutcomeStatus(str, Enum):
    FULFILLED = "FULFILLED"
    NOT_FOUND = "NOT_FOUND"


@dataclass(frozen=True)
class ProxyBeliefState:
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("proxy belief state must be non-empty")


@dataclass(frozen=True)
class ActionThought:
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("action thought must be non-empty")


@dataclass(frozen=True)
class InteractionStep:
    action: str
    query_text: str
    parsed_query: str | None
    parse_error: str | None
    result_preview: str
    extraction: str
    verdict: StepVerdict

    def to_json_dict(self) -> dict:
        return {
            "action": self.action,
            "query_text": self.query_text,
            "parsed_query": self.parsed_query,
            "parse_error": self.parse_error,
            "result_preview": self.result_preview,
            "extraction": self.extraction,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class InteractionOutcome:
    info: str
    status: OutcomeStatus
    rounds_used: int

    def __post_init__(self) -> None:
        if self.rounds_used < 1:
            raise ValueError("rounds_used must be >= 1")

    def to_json_dict(self) -> dict:
        return {"info": self.info, "status": self.status.value, "rounds_used": self.rounds_used}


@dataclass(frozen=True)
class TurnTrace:
    dialogue_id: str
    turn_index: int
    proxy_bs: ProxyBeliefState
    steps: tuple[InteractionStep, ...]
    outcome: InteractionOutcome
    response: str
    timings_ms: dict[str, int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "dialogue_id": self.dialogue_id,
            "turn_index": self.turn_index,
            "proxy_bs": self.proxy_bs.text,
            "steps": [s.to_json_dict() for s in self.steps],
            "outcome": self.outcome.to_json_dict(),
            "response": self.response,
            "timings_ms": dict(sorted(self.timings_ms.items())),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TurnTrace":
        steps = tuple(
            InteractionStep(
                action=s["action"],
                query_text=s["query_text"],
                parsed_query=s.get("parsed_query"),
                parse_error=s.get("parse_error"),
                result_preview=s["result_preview"],
                extraction=s["extraction"],
                verdict=StepVerdict(s["verdict"]),
            )
            for s in data["steps"]
        )
        outcome = InteractionOutcome(
            info=data["outcome"]["info"],
            status=OutcomeStatus(data["outcome"]["status"]),
            rounds_used=data["outcome"]["rounds_used"],
        )
        return cls(
            dialogue_id=data["dialogue_id"],
            turn_index=data["turn_index"],
            proxy_bs=ProxyBeliefState(data["proxy_bs"]),
            steps=steps,
            outcome=outcome,
            response=data["response"],
            timings_ms=dict(data.get("timings_ms", {})),
        )
