"""Delexicalization: replace surfaced KB values with typed placeholders.

Replacement is longest-match-first and case-insensitive, skips spans that are
already placeholders (so the operation is idempotent), and can record which
named entities were offered per domain for task-completion scoring.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from ..kb.catalog import KbCatalog

DEFAULT_VALUE_MAP: Mapping[str, tuple[str, ...]] = {
    "[value_name]": ("name",),
    "[value_address]": ("address",),
    "[value_postcode]": ("postcode",),
    "[value_phone]": ("phone",),
    "[value_pricerange]": ("pricerange",),
    "[value_area]": ("area",),
    "[value_food]": ("food",),
    "[value_time]": ("time", "leaveAt", "arriveBy"),
    "[value_day]": ("day",),
    "[value_people]": ("people",),
    "[value_reference]": (),
    "[value_count]": (),
    "[value_type]": ("type",),
    "[value_stars]": ("stars",),
}

_PLACEHOLDER = r"\[value_[a-z]+\]"
_TIME = r"(?<!\w)(?:[01]?\d|2[0-3]):[0-5]\d(?!\w)"
_REFERENCE = r"(?<!\w)[0-9a-f]{8}(?!\w)"
_NUMBER = r"(?<!\w)\d+(?!\w)"


def _value_variants(value: str, placeholder: str) -> Iterable[str]:
    yield value
    if placeholder == "[value_name]":
        yield f"the {value}"
    if "centre" in value:
        yield value.replace("centre", "center")
    if "center" in value:
        yield value.replace("center", "centre")


def _build_variant_table(
    catalog: KbCatalog, value_map: Mapping[str, tuple[str, ...]]
) -> list[tuple[str, str, str | None, str | None]]:
    """(variant, placeholder, domain, canonical value) rows, longest variant first."""
    rows: list[tuple[str, str, str | None, str | None]] = []
    seen: set[str] = set()
    for placeholder, attrs in value_map.items():
        wanted = {a.casefold() for a in attrs}
        if not wanted:
            continue
        for domain in sorted(catalog.tables):
            table = catalog.tables[domain]
            for idx, attr in enumerate(table.attributes):
                if attr.casefold() not in wanted:
                    continue
                for row in table.rows:
                    value = row[idx]
                    if not value:
                        continue
                    for variant in _value_variants(value, placeholder):
                        key = variant.casefold()
                        if key in seen:
                            continue
                        seen.add(key)
                        is_name = placeholder == "[value_name]"
                        rows.append(
                            (variant, placeholder, domain if is_name else None, value if is_name else None)
                        )
    rows.sort(key=lambda r: len(r[0]), reverse=True)
    return rows


def _delexicalize(
    response: str,
    catalog: KbCatalog,
    value_map: Mapping[str, tuple[str, ...]],
) -> tuple[str, dict[str, set[str]]]:
    variants = _build_variant_table(catalog, value_map)
    lookup = {v.casefold(): (ph, domain, canonical) for v, ph, domain, canonical in variants}

    branches = [_PLACEHOLDER, _TIME]
    branches.extend(rf"(?<!\w){re.escape(v)}(?!\w)" for v, _, _, _ in variants)
    branches.extend([_REFERENCE, _NUMBER])
    pattern = re.compile("|".join(f"(?:{b})" for b in branches), re.IGNORECASE)

    offered: dict[str, set[str]] = {}

    def _replace(match: re.Match) -> str:
        text = match.group(0)
        folded = text.casefold()
        if re.fullmatch(_PLACEHOLDER, folded):
            return text
        hit = lookup.get(folded)
        if hit is not None:
            placeholder, domain, canonical = hit
            if domain is not None and canonical is not None:
                offered.setdefault(domain, set()).add(canonical)
            return placeholder
        if re.fullmatch(_TIME, folded):
            return "[value_time]"
        if re.fullmatch(_REFERENCE, folded):
            return "[value_reference]"
        return "[value_count]"

    return pattern.sub(_replace, response), offered


def delexicalize(
    response: str,
    catalog: KbCatalog,
    value_map: Mapping[str, tuple[str, ...]] | None = None,
) -> str:
    text, _ = _delexicalize(response, catalog, value_map or DEFAULT_VALUE_MAP)
    return text


def delexicalize_tracking(
    response: str,
    catalog: KbCatalog,
    value_map: Mapping[str, tuple[str, ...]] | None = None,
) -> tuple[str, dict[str, set[str]]]:
    """Delexicalized text plus, per domain, the canonical entity names whose
    surface form was replaced by [value_name]."""
    return _delexicalize(response, catalog, value_map or DEFAULT_VALUE_MAP)
