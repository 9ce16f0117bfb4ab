"""Modular subtask runners: intent classification, state tracking, response generation."""

from __future__ import annotations

import re
from typing import Sequence

from ..dialogue import DialogueContext
from ..dst.belief import ParsedBeliefState, parse_belief_state
from ..dst.intents import IntentPrediction, parse_intents
from ..gateway.base import Backend, CompletionRequest
from ..prompts.builders import (
    DstSetting,
    IcMode,
    SlotCatalog,
    SystemActSet,
    build_dst_prompt,
    build_ic_prompt,
    build_rg_prompt,
)

_SYSTEM_ECHO = re.compile(r"^\s*SYSTEM:\s*", re.IGNORECASE)


def _complete(backend: Backend, prompt: str, tag: str, max_tokens: int, temperature: float) -> str:
    request = CompletionRequest(prompt=prompt, max_tokens=max_tokens, temperature=temperature, tag=tag)
    return backend.complete(request).text


def run_ic(
    backend: Backend,
    utterance: str,
    labels: Sequence[str],
    mode: IcMode = IcMode.SINGLE,
    max_tokens: int = 64,
    temperature: float = 0.0,
) -> IntentPrediction:
    prompt = build_ic_prompt(labels, utterance, mode)
    raw = _complete(backend, prompt, "ic", max_tokens, temperature)
    return parse_intents(raw, labels, mode)


def run_dst(
    backend: Backend,
    context: DialogueContext,
    catalog: SlotCatalog,
    setting: DstSetting = DstSetting.ALL_SLOTS,
    active_domain: str = "",
    max_tokens: int = 256,
    temperature: float = 0.0,
) -> ParsedBeliefState:
    if not context.turns:
        raise ValueError("context must be non-empty")
    prompt = build_dst_prompt(catalog, context, setting, active_domain)
    raw = _complete(backend, prompt, "dst", max_tokens, temperature)
    return parse_belief_state(raw, catalog)


def run_rg(
    backend: Backend,
    context: DialogueContext,
    acts: SystemActSet,
    max_tokens: int = 256,
    temperature: float = 0.0,
) -> str:
    prompt = build_rg_prompt(acts, context)
    raw = _complete(backend, prompt, "rg", max_tokens, temperature)
    return _SYSTEM_ECHO.sub("", raw, count=1).strip()
