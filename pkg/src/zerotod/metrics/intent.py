"""Top-k intent accuracy."""

from __future__ import annotations

from typing import Sequence

from ..dst.intents import IntentPrediction, canonical_label
from .dst import LengthMismatch


def intent_accuracy(preds: Sequence[IntentPrediction], golds: Sequence[str], k: int = 1) -> float:
    """Fraction of examples whose gold label appears among the first k predictions."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2, or 3")
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    if not preds:
        raise LengthMismatch("need at least one example")
    hits = 0
    for pred, gold in zip(preds, golds):
        gold_canon = canonical_label(gold)
        if any(canonical_label(label) == gold_canon for label in pred.ranked[:k]):
            hits += 1
    return hits / len(preds)
