"""Query execution over the catalog, and result rendering for prompts."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .catalog import KbCatalog, KbTable, UnknownAttribute
from .query import KbQuery, Predicate, QueryOp

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)")
_TIME = re.compile(r"(\d{1,2}):(\d{2})")

NO_MATCH_SENTINEL = "NO MATCHING ROWS"


@dataclass(frozen=True)
class KbResult:
    attributes: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    truncated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))


def resolve_attribute(table: KbTable, name: str) -> str:
    """Canonical attribute name for a possibly differently-cased reference."""
    if name in table.attributes:
        return name
    folded = name.casefold()
    matches = [a for a in table.attributes if a.casefold() == folded]
    if len(matches) == 1:
        return matches[0]
    raise UnknownAttribute(f"table {table.name!r} has no attribute {name!r}")


def _order_key(value: str):
    """Comparison key: numeric if a plain number, minutes if HH:MM, else the text."""
    if _NUMBER.fullmatch(value):
        return ("num", float(value))
    m = _TIME.fullmatch(value)
    if m:
        return ("time", int(m.group(1)) * 60 + int(m.group(2)))
    return ("text", value)


def _compare(value: str, op: QueryOp, literal: str) -> bool:
    lit = " ".join(literal.strip().lower().split())
    if op is QueryOp.EQ:
        return value == lit
    if op is QueryOp.NEQ:
        return value != lit
    if op is QueryOp.CONTAINS:
        return lit in value
    left, right = _order_key(value), _order_key(lit)
    if left[0] != right[0]:
        left, right = ("text", value), ("text", lit)
    if op is QueryOp.LTE:
        return left[1] <= right[1]
    return left[1] >= right[1]


def _matches(row: tuple[str, ...], table: KbTable, predicates: tuple[Predicate, ...]) -> bool:
    for pred in predicates:
        idx = table.attributes.index(resolve_attribute(table, pred.attribute))
        if not _compare(row[idx], pred.op, pred.literal):
            return False
    return True


def execute(query: KbQuery, catalog: KbCatalog) -> KbResult:
    """Conjunctive filter in table order, then projection and limit.

    EQ/NEQ compare normalized strings exactly; LTE/GTE compare numerically
    when both sides are plain numbers or HH:MM times, lexicographically
    otherwise; CONTAINS is substring. The catalog is never mutated.
    """
    table = catalog.table(query.table)
    for pred in query.predicates:
        resolve_attribute(table, pred.attribute)
    if query.projection is None:
        out_attrs = table.attributes
    else:
        out_attrs = tuple(resolve_attribute(table, a) for a in query.projection)

    matched = [row for row in table.rows if _matches(row, table, query.predicates)]
    truncated = query.limit is not None and len(matched) > query.limit
    if query.limit is not None:
        matched = matched[: query.limit]

    indices = [table.attributes.index(a) for a in out_attrs]
    rows = tuple(tuple(row[i] for i in indices) for row in matched)
    return KbResult(attributes=out_attrs, rows=rows, truncated=truncated)


def result_to_text(result: KbResult, max_rows: int = 10) -> str:
    """Render at most max_rows rows as "attr: value" lines; empty results
    render the fixed sentinel so downstream prompts stay well-formed."""
    if max_rows < 1:
        raise ValueError("max_rows must be >= 1")
    if not result.rows:
        return NO_MATCH_SENTINEL
    lines = [
        ", ".join(f"{attr}: {value}" for attr, value in zip(result.attributes, row))
        for row in result.rows[:max_rows]
    ]
    remainder = len(result.rows) - max_rows
    if remainder > 0:
        lines.append(f"(+{remainder} more)")
    return "\n".join(lines)
