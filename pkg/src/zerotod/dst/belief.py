"""Belief states and robust extraction from model output."""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field

from ..prompts.builders import SlotCatalog
from .normalize import generic_normalize

DROPPED_VALUES = {"", "none", "not mentioned"}

_PAIR = re.compile(r"""['"]([^'"]+)['"]\s*:\s*['"]([^'"]*)['"]""")


def normalize_state_key(key: str) -> str:
    """Lowercase hyphen-joined "domain-slot" form."""
    return "-".join(str(key).strip().lower().split())


@dataclass(frozen=True)
class BeliefState:
    entries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(sorted(dict(self.entries).items())))

    @classmethod
    def build(cls, mapping) -> "BeliefState":
        """Normalize keys/values and drop empty-ish values."""
        out = {}
        for key, value in dict(mapping).items():
            k = normalize_state_key(key)
            v = generic_normalize(str(value))
            if not k or v in DROPPED_VALUES:
                continue
            out[k] = v
        return cls(tuple(out.items()))

    def as_dict(self) -> dict[str, str]:
        return dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class ParsedBeliefState:
    state: BeliefState
    out_of_catalog: tuple[str, ...] = ()
    found_object: bool = False

    @property
    def warning(self) -> bool:
        return not self.found_object


def _balanced_spans(raw: str):
    depth = 0
    start = None
    for i, ch in enumerate(raw):
        if ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}" and depth > 0:
            depth -= 1
            if depth == 0 and start is not None:
                yield raw[start : i + 1]
                start = None


def _parse_object(snippet: str) -> dict | None:
    for loader in (json.loads, ast.literal_eval):
        try:
            obj = loader(snippet)
        except (ValueError, SyntaxError):
            continue
        if isinstance(obj, dict):
            return obj
    pairs = _PAIR.findall(snippet)
    if pairs:
        return dict(pairs)
    return None


def parse_belief_state(raw: str, catalog: SlotCatalog) -> ParsedBeliefState:
    """Extract the first parseable {...} object from model output.

    Total: unparseable input yields an empty state with the warning flag set,
    never an exception. Keys outside the slot catalog are dropped and reported
    as out-of-catalog predictions.
    """
    known = catalog.key_set()
    for snippet in _balanced_spans(raw):
        obj = _parse_object(snippet)
        if obj is None:
            continue
        kept = {}
        dropped = []
        for key, value in obj.items():
            norm_key = normalize_state_key(key)
            if norm_key in known:
                kept[norm_key] = value
            else:
                dropped.append(norm_key)
        return ParsedBeliefState(
            state=BeliefState.build(kept),
            out_of_catalog=tuple(dropped),
            found_object=True,
        )
    return ParsedBeliefState(state=BeliefState(), out_of_catalog=(), found_object=False)
