"""Dialogue-state scoring: joint goal accuracy and micro Slot-F1."""

from __future__ import annotations

from typing import Sequence

from ..dst.belief import BeliefState
from ..dst.normalize import normalize_value


class MetricError(Exception):
    pass


class LengthMismatch(MetricError):
    pass


def _scored_pairs(state: BeliefState) -> frozenset[tuple[str, str]]:
    """(domain-slot, value) pairs with the substitution table applied."""
    return frozenset((k, normalize_value(k, v)) for k, v in state.entries)


def jga(preds: Sequence[BeliefState], golds: Sequence[BeliefState]) -> float:
    """Fraction of turns whose full normalized entry map equals gold exactly."""
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    if not preds:
        raise LengthMismatch("need at least one turn")
    hits = sum(1 for p, g in zip(preds, golds) if _scored_pairs(p) == _scored_pairs(g))
    return hits / len(preds)


def slot_f1(preds: Sequence[BeliefState], golds: Sequence[BeliefState]) -> tuple[float, float, float]:
    """Micro-averaged precision/recall/F1 over (domain-slot, value) pairs.

    With zero pairs on both sides across the whole corpus the scores are
    pinned to (0, 0, 0); callers that care should check pair counts.
    """
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    tp = pred_total = gold_total = 0
    for pred, gold in zip(preds, golds):
        p_pairs, g_pairs = _scored_pairs(pred), _scored_pairs(gold)
        tp += len(p_pairs & g_pairs)
        pred_total += len(p_pairs)
        gold_total += len(g_pairs)
    precision = tp / pred_total if pred_total else 0.0
    recall = tp / gold_total if gold_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1
