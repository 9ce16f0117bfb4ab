"""The end-to-end turn loop: proxy belief state -> KB interaction -> response.

The interaction loop is bounded by max_rounds; query-stage failures (parse or
execution) consume a round and re-prompt with the error appended, two in a
row force NOT_FOUND, and every artifact lands in the TurnTrace.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from ..dialogue import DialogueContext, Speaker
from ..gateway.base import Backend, CompletionRequest, ContextOverflow, GatewayError
from ..kb.catalog import KbCatalog, KbError
from ..kb.executor import execute, result_to_text
from ..kb.query import parse_query, print_query
from ..prompts.builders import (
    E2E_RG_EXAMPLE_BLOCK,
    PROXY_BS_EXAMPLE_BLOCK,
    fit_context_to_window,
    kb_to_text,
)
from ..prompts.templates import PromptError, TemplateId, get_template, internal_prompt
from .trace import (
    ActionThought,
    InteractionOutcome,
    InteractionStep,
    OutcomeStatus,
    ProxyBeliefState,
    StepVerdict,
    TurnTrace,
)


class PipelineError(Exception):
    pass


class EmptyGeneration(PipelineError):
    pass


class TurnAborted(PipelineError):
    """Unrecoverable backend failure; carries the trace built so far."""

    def __init__(self, message: str, partial: dict) -> None:
        super().__init__(message)
        self.partial = partial


NOT_FOUND_ACT = (
    "No matching information was found in the knowledge base. "
    "Politely ask the user for additional details or to relax a constraint."
)

_BOOKING_CUE = re.compile(r"\b(book|booking|reserve|reservation)\b", re.IGNORECASE)
_NEED_ANCHOR = re.compile(r"Need:\s*", re.IGNORECASE)
_SYSTEM_ECHO = re.compile(r"^\s*SYSTEM:\s*", re.IGNORECASE)


@dataclass
class PipelineConfig:
    max_rounds: int = 5
    kb_result_max_rows: int = 10
    max_value_len: int = 100
    task_description: str = "the user's task"
    drop_attributes: frozenset[str] = frozenset()
    max_tokens: int = 256
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        self.drop_attributes = frozenset(self.drop_attributes)


class _Meter:
    """Issues completions and accumulates reported latency per stage tag."""

    def __init__(self, backend: Backend, cfg: PipelineConfig) -> None:
        self.backend = backend
        self.cfg = cfg
        self.timings: dict[str, int] = {}

    def complete(self, prompt: str, tag: str) -> str:
        request = CompletionRequest(
            prompt=prompt,
            max_tokens=self.cfg.max_tokens,
            temperature=self.cfg.temperature,
            tag=tag,
        )
        result = self.backend.complete(request)
        self.timings[tag] = self.timings.get(tag, 0) + result.latency_ms
        return result.text


def _schema_text(catalog: KbCatalog) -> str:
    return "\n".join(
        f"table {name}: {', '.join(catalog.tables[name].attributes)}"
        for name in sorted(catalog.tables)
    )


def proxy_belief_state(
    backend: Backend,
    context: DialogueContext,
    attributes: list[str],
    cfg: PipelineConfig | None = None,
    _meter: "_Meter | None" = None,
) -> ProxyBeliefState:
    """Free-text statement of what the user currently needs (the "Need:" line)."""
    cfg = cfg or PipelineConfig()
    if context.last_speaker is not Speaker.USER:
        raise ValueError("context must end with a user turn")
    meter = _meter or _Meter(backend, cfg)
    template = get_template(TemplateId.PROXY_BS)

    def build(ctx: DialogueContext) -> str:
        return template.render(
            {
                "SLOTS": ", ".join(attributes),
                "EXAMPLES": PROXY_BS_EXAMPLE_BLOCK,
                "DIALOGUE_CONTEXT": ctx.render(),
            }
        )

    prompt, _ = fit_context_to_window(build, context, backend.window_chars)
    for _ in range(2):
        text = meter.complete(prompt, "proxy_bs")
        anchored = _NEED_ANCHOR.split(text, maxsplit=1)
        candidate = (anchored[1] if len(anchored) > 1 else text).strip()
        if candidate:
            return ProxyBeliefState(candidate)
    raise EmptyGeneration("proxy belief state generation returned blank text twice")


def action_thought(
    backend: Backend,
    proxy: ProxyBeliefState,
    attributes: list[str],
    prior_extraction: str | None = None,
    cfg: PipelineConfig | None = None,
    _meter: "_Meter | None" = None,
) -> ActionThought:
    """First round: the rendered interaction template wrapping the proxy state
    (no completion). Later rounds: generated from the prior extraction."""
    if not attributes:
        raise ValueError("attributes must be non-empty")
    cfg = cfg or PipelineConfig()
    if prior_extraction is None:
        rendered = get_template(TemplateId.KB_INTERACT_INIT).render({"PROXY_BS": proxy.text})
        return ActionThought(rendered)
    meter = _meter or _Meter(backend, cfg)
    prompt = internal_prompt(
        "action_next",
        {
            "PROXY_BS": proxy.text,
            "ATTRIBUTES": ", ".join(attributes),
            "EXTRACTION": prior_extraction,
        },
    )
    text = meter.complete(prompt, "action").strip()
    return ActionThought(text or "Fetch more detail for the current need.")


_VERDICT_FULFILLED = re.compile(r"\s*FULFILLED\s*[:\-]?\s*(.*)", re.IGNORECASE | re.DOTALL)
_VERDICT_NOT_FOUND = re.compile(r"\s*NOT[_ ]?FOUND\b", re.IGNORECASE)
_VERDICT_CONTINUE = re.compile(r"\s*CONTINUE\s*[:\-]?\s*(.*)", re.IGNORECASE | re.DOTALL)


def _parse_verdict(text: str) -> tuple[StepVerdict, str]:
    m = _VERDICT_FULFILLED.match(text)
    if m:
        return StepVerdict.FULFILLED, m.group(1).strip()
    if _VERDICT_NOT_FOUND.match(text):
        return StepVerdict.NOT_FOUND, ""
    m = _VERDICT_CONTINUE.match(text)
    if m:
        return StepVerdict.CONTINUE, m.group(1).strip()
    return StepVerdict.CONTINUE, text.strip()


def kb_interact(
    backend: Backend,
    proxy: ProxyBeliefState,
    catalog: KbCatalog,
    cfg: PipelineConfig | None = None,
    _meter: "_Meter | None" = None,
) -> tuple[InteractionOutcome, tuple[InteractionStep, ...]]:
    """Bounded action/query/extract loop; DSL and extraction failures are
    absorbed into NOT_FOUND, never raised."""
    cfg = cfg or PipelineConfig()
    if not catalog.tables:
        raise ValueError("catalog must be non-empty")
    meter = _meter or _Meter(backend, cfg)
    attributes = catalog.attribute_names()
    schema = _schema_text(catalog)

    steps: list[InteractionStep] = []
    action: ActionThought | None = None
    prior_extraction: str | None = None
    error_note = ""
    consecutive_failures = 0
    outcome: InteractionOutcome | None = None

    for round_no in range(1, cfg.max_rounds + 1):
        if action is None or not error_note:
            action = action_thought(
                backend, proxy, attributes, prior_extraction, cfg, _meter=meter
            )

        query_prompt = internal_prompt(
            "kb_query", {"SCHEMA": schema, "ACTION": action.text, "NOTES": error_note}
        )
        query_text = meter.complete(query_prompt, "query")

        try:
            parsed = parse_query(query_text)
            result = execute(parsed, catalog)
        except (KbError, ValueError) as exc:
            consecutive_failures += 1
            terminal = consecutive_failures >= 2 or round_no == cfg.max_rounds
            steps.append(
                InteractionStep(
                    action=action.text,
                    query_text=query_text,
                    parsed_query=None,
                    parse_error=str(exc),
                    result_preview="",
                    extraction="",
                    verdict=StepVerdict.NOT_FOUND if terminal else StepVerdict.CONTINUE,
                )
            )
            if terminal:
                outcome = InteractionOutcome("", OutcomeStatus.NOT_FOUND, round_no)
                break
            error_note = (
                f"Your previous query could not be executed ({exc}). "
                "Write a corrected query in the required form."
            )
            continue

        consecutive_failures = 0
        error_note = ""
        preview = result_to_text(result, cfg.kb_result_max_rows)
        extract_prompt = internal_prompt(
            "kb_extract",
            {"ACTION": action.text, "QUERY": print_query(parsed), "RESULT": preview},
        )
        extraction_raw = meter.complete(extract_prompt, "extract")
        verdict, payload = _parse_verdict(extraction_raw)
        if verdict is StepVerdict.CONTINUE and round_no == cfg.max_rounds:
            verdict = StepVerdict.NOT_FOUND

        steps.append(
            InteractionStep(
                action=action.text,
                query_text=query_text,
                parsed_query=print_query(parsed),
                parse_error=None,
                result_preview=preview,
                extraction=extraction_raw,
                verdict=verdict,
            )
        )
        if verdict is StepVerdict.FULFILLED:
            outcome = InteractionOutcome(payload, OutcomeStatus.FULFILLED, round_no)
            break
        if verdict is StepVerdict.NOT_FOUND:
            outcome = InteractionOutcome("", OutcomeStatus.NOT_FOUND, round_no)
            break
        prior_extraction = payload or extraction_raw

    assert outcome is not None
    return outcome, tuple(steps)


def respond(
    backend: Backend,
    outcome: InteractionOutcome,
    context: DialogueContext,
    cfg: PipelineConfig | None = None,
    _meter: "_Meter | None" = None,
) -> str:
    """Grounded response from the final information plus the dialogue context;
    NOT_FOUND turns into a clarification request."""
    cfg = cfg or PipelineConfig()
    meter = _meter or _Meter(backend, cfg)
    act = outcome.info if outcome.status is OutcomeStatus.FULFILLED else NOT_FOUND_ACT
    template = get_template(TemplateId.E2E_RG)

    def build(ctx: DialogueContext) -> str:
        return template.render(
            {
                "TASK": cfg.task_description,
                "EXAMPLES": E2E_RG_EXAMPLE_BLOCK,
                "CONTEXT": "\n" + ctx.render(),
                "ACT": act,
            }
        )

    prompt, _ = fit_context_to_window(build, context, backend.window_chars)
    text = meter.complete(prompt, "respond")
    return _SYSTEM_ECHO.sub("", text, count=1).strip()


def booking_reference(dialogue_id: str, turn_index: int) -> str:
    """Deterministic 8-hex pseudo-reference for simulated bookings."""
    return hashlib.sha256(f"{dialogue_id}:{turn_index}".encode("utf-8")).hexdigest()[:8]


def run_turn(
    backend: Backend,
    context: DialogueContext,
    catalog: KbCatalog,
    cfg: PipelineConfig | None = None,
) -> TurnTrace:
    """Full turn: proxy belief state -> KB interaction -> response, fully traced.

    Issues at most 2 + 3 * max_rounds completions. Unrecoverable backend
    errors abort with the trace built so far attached to TurnAborted.
    """
    cfg = cfg or PipelineConfig()
    if context.last_speaker is not Speaker.USER:
        raise ValueError("context must end with a user turn")
    meter = _Meter(backend, cfg)
    turn_index = context.user_turn_count - 1
    partial: dict = {"dialogue_id": context.dialogue_id, "turn_index": turn_index}

    try:
        proxy = proxy_belief_state(backend, context, catalog.attribute_names(), cfg, _meter=meter)
        partial["proxy_bs"] = proxy.text

        outcome, steps = kb_interact(backend, proxy, catalog, cfg, _meter=meter)
        partial["steps"] = [s.to_json_dict() for s in steps]

        if outcome.status is OutcomeStatus.FULFILLED and _BOOKING_CUE.search(context.turns[-1].text):
            ref = booking_reference(context.dialogue_id, turn_index)
            outcome = InteractionOutcome(
                f"{outcome.info} Booking reference: {ref}.", outcome.status, outcome.rounds_used
            )
        partial["outcome"] = outcome.to_json_dict()

        response = respond(backend, outcome, context, cfg, _meter=meter)
    except (GatewayError, EmptyGeneration, PromptError) as exc:
        raise TurnAborted(str(exc), partial) from exc

    return TurnTrace(
        dialogue_id=context.dialogue_id,
        turn_index=turn_index,
        proxy_bs=proxy,
        steps=steps,
        outcome=outcome,
        response=response,
        timings_ms=meter.timings,
    )


def respond_naive(
    backend: Backend,
    catalog: KbCatalog,
    context: DialogueContext,
    cfg: PipelineConfig | None = None,
) -> str:
    """Single-shot baseline: the whole serialized (filtered) KB in one prompt.

    Raises ContextOverflow when the KB does not fit the backend window even
    after the oldest context pairs are dropped.
    """
    cfg = cfg or PipelineConfig()
    meter = _Meter(backend, cfg)
    database = kb_to_text(catalog, cfg.max_value_len, cfg.drop_attributes)
    template = get_template(TemplateId.RG_NAIVE)

    def build(ctx: DialogueContext) -> str:
        return template.render(
            {
                "TASK": cfg.task_description,
                "DATABASE": database,
                "DIALOGUE_CONTEXT": ctx.render(),
            }
        )

    try:
        prompt, _ = fit_context_to_window(build, context, backend.window_chars)
    except PromptError as exc:
        raise ContextOverflow(f"serialized KB does not fit the backend window: {exc}") from exc
    text = meter.complete(prompt, "naive")
    return _SYSTEM_ECHO.sub("", text, count=1).strip()
