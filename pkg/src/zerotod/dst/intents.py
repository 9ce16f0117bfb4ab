"""Intent-prediction parsing from model output."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..prompts.builders import IcMode

UNPARSEABLE = "UNPARSEABLE"

_LEADING_INDEX = re.compile(r"^\s*\d+[\s.):\-]*")


def canonical_label(label: str) -> str:
    """Case-insensitive with underscore/space unification."""
    return re.sub(r"[\s_]+", "_", label.strip().lower())


@dataclass(frozen=True)
class IntentPrediction:
    ranked: tuple[str, ...]

    def __post_init__(self) -> None:
        ranked = tuple(self.ranked)
        if not ranked:
            raise ValueError("ranked labels must be non-empty")
        if len(set(ranked)) != len(ranked):
            raise ValueError("duplicate labels in prediction")
        object.__setattr__(self, "ranked", ranked)

    @property
    def top(self) -> str:
        return self.ranked[0]


def parse_intents(raw: str, labels: Sequence[str], mode: IcMode = IcMode.SINGLE) -> IntentPrediction:
    """Match output lines against the label set; unmatched lines are dropped.

    Leading numeric indices ("11 card_arrival") are stripped. When nothing
    matches, the reserved UNPARSEABLE label is recorded so scoring can count
    the example as incorrect.
    """
    if not labels:
        raise ValueError("labels must be non-empty")
    by_canonical = {canonical_label(label): label for label in labels}
    cap = 1 if IcMode(mode) is IcMode.SINGLE else 3

    matched: list[str] = []
    for line in raw.splitlines():
        text = _LEADING_INDEX.sub("", line.strip()).strip().strip("\"'`").rstrip(".,;")
        if not text:
            continue
        label = by_canonical.get(canonical_label(text))
        if label is not None and label not in matched:
            matched.append(label)
            if len(matched) == cap:
                break
    if not matched:
        return IntentPrediction((UNPARSEABLE,))
    return IntentPrediction(tuple(matched))
