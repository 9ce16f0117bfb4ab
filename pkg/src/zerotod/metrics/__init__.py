"""Scoring: JGA, Slot-F1, intent accuracy, BLEU, delexicalization,
Inform/Success, lexical diversity, and report aggregation."""

from .bleu import EmptyCorpus, bleu_tokenize, corpus_bleu
from .delex import DEFAULT_VALUE_MAP, delexicalize, delexicalize_tracking
from .diversity import TooShort, hdd, mattr, mtld, ttr, vocd, vocd_curve, vocd_model
from .dst import LengthMismatch, MetricError, jga, slot_f1
from .intent import intent_accuracy
from .report import AlignmentError, MetricsReport, References, report, word_tokens
from .taskcomp import (
    REQUESTABLE_PLACEHOLDERS,
    DialogueCompletion,
    DomainGoal,
    GoalSpec,
    MissingGoal,
    TaskCompletion,
    evaluate_dialogue,
    inform_success,
)

__all__ = [
    "AlignmentError",
    "DEFAULT_VALUE_MAP",
    "DialogueCompletion",
    "DomainGoal",
    "EmptyCorpus",
    "GoalSpec",
    "LengthMismatch",
    "MetricError",
    "MetricsReport",
    "MissingGoal",
    "REQUESTABLE_PLACEHOLDERS",
    "References",
    "TaskCompletion",
    "TooShort",
    "bleu_tokenize",
    "corpus_bleu",
    "delexicalize",
    "delexicalize_tracking",
    "evaluate_dialogue",
    "hdd",
    "inform_success",
    "intent_accuracy",
    "jga",
    "mattr",
    "mtld",
    "report",
    "slot_f1",
    "ttr",
    "vocd",
    "vocd_curve",
    "vocd_model",
    "word_tokens",
]
