"""Parsing of model output into belief states and intents, plus value normalization."""

from .belief import (
    DROPPED_VALUES,
    BeliefState,
    ParsedBeliefState,
    normalize_state_key,
    parse_belief_state,
)
from .intents import UNPARSEABLE, IntentPrediction, canonical_label, parse_intents
from .normalize import generic_normalize, normalize_value

__all__ = [
    "BeliefState",
    "DROPPED_VALUES",
    "IntentPrediction",
    "ParsedBeliefState",
    "UNPARSEABLE",
    "canonical_label",
    "generic_normalize",
    "normalize_state_key",
    "normalize_value",
    "parse_belief_state",
    "parse_intents",
]
