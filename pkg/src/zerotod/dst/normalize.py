"""Value normalization for exact-match scoring.

The substitution table ships as a versioned TSV resource
(``pattern<TAB>replacement<TAB>slot_glob``); patterns are regexes written
against lowercased values. Generic lowercase/trim runs first, then the table,
then a final whitespace collapse — the composition is idempotent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fnmatch import fnmatch
from importlib import resources


@dataclass(frozen=True)
class _Rule:
    pattern: re.Pattern
    replacement: str
    globs: tuple[str, ...]

    def applies_to(self, slot: str) -> bool:
        return any(fnmatch(slot, g) for g in self.globs)


def _load_rules() -> tuple[_Rule, ...]:
    text = (resources.files("zerotod.dst") / "resources" / "typo_fixes.tsv").read_text("utf-8")
    rules = []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        pattern, replacement, glob_field = line.split("\t")
        rules.append(
            _Rule(
                pattern=re.compile(pattern),
                replacement=replacement,
                globs=tuple(glob_field.split("|")),
            )
        )
    return tuple(rules)


_RULES: tuple[_Rule, ...] | None = None


def _rules() -> tuple[_Rule, ...]:
    global _RULES
    if _RULES is None:
        _RULES = _load_rules()
    return _RULES


def generic_normalize(value: str) -> str:
    """Lowercase, trim, collapse internal whitespace."""
    return " ".join(value.strip().lower().split())


def normalize_value(slot: str, value: str) -> str:
    out = generic_normalize(value)
    slot_key = slot.strip().lower()
    for rule in _rules():
        if rule.applies_to(slot_key):
            out = rule.pattern.sub(rule.replacement, out)
    return " ".join(out.split())
