"""Dialogue pipeline: the end-to-end turn loop, the naive baseline, and modular runners."""

from ..dialogue import DialogueContext, Speaker, Turn
from .modular import run_dst, run_ic, run_rg
from .trace import (
    ActionThought,
    InteractionOutcome,
    InteractionStep,
    OutcomeStatus,
    ProxyBeliefState,
    StepVerdict,
    TurnTrace,
)
from .turn import (
    NOT_FOUND_ACT,
    EmptyGeneration,
    PipelineConfig,
    PipelineError,
    TurnAborted,
    action_thought,
    booking_reference,
    kb_interact,
    proxy_belief_state,
    respond,
    respond_naive,
    run_turn,
)

__all__ = [
    "ActionThought",
    "DialogueContext",
    "EmptyGeneration",
    "InteractionOutcome",
    "InteractionStep",
    "NOT_FOUND_ACT",
    "OutcomeStatus",
    "PipelineConfig",
    "PipelineError",
    "ProxyBeliefState",
    "Speaker",
    "StepVerdict",
    "Turn",
    "TurnAborted",
    "TurnTrace",
    "action_thought",
    "booking_reference",
    "kb_interact",
    "proxy_belief_state",
    "respond",
    "respond_naive",
    "run_dst",
    "run_ic",
    "run_rg",
    "run_turn",
]
