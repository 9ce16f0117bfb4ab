"""Naive full-scan reference executor.

Exists solely as a testing oracle for execute(); the predicate evaluation
here is written independently and must stay decoupled from executor.py.
"""

from __future__ import annotations

from .catalog import KbCatalog, UnknownAttribute
from .executor import KbResult
from .query import KbQuery, QueryOp


def _oracle_resolve(attributes: tuple[str, ...], name: str, table_name: str) -> str:
    if name in attributes:
        return name
    candidates = [a for a in attributes if a.lower() == name.lower()]
    if len(candidates) == 1:
        return candidates[0]
    raise UnknownAttribute(f"table {table_name!r} has no attribute {name!r}")


def _oracle_number(text: str) -> float | None:
    stripped = text
    if stripped.startswith(("+", "-")):
        stripped = stripped[1:]
    if not stripped:
        return None
    dot_count = stripped.count(".")
    if dot_count > 1:
        return None
    digits = stripped.replace(".", "")
    if not digits or not digits.isdigit():
        return None
    return float(text)


def _oracle_minutes(text: str) -> int | None:
    if ":" not in text:
        return None
    head, _, tail = text.partition(":")
    if not (head.isdigit() and tail.isdigit()):
        return None
    if not (1 <= len(head) <= 2 and len(tail) == 2):
        return None
    return int(head) * 60 + int(tail)


def _oracle_holds(value: str, op: QueryOp, raw_literal: str) -> bool:
    literal = " ".join(raw_literal.strip().lower().split())
    if op is QueryOp.EQ:
        return value == literal
    if op is QueryOp.NEQ:
        return value != literal
    if op is QueryOp.CONTAINS:
        return literal in value

    value_num, literal_num = _oracle_number(value), _oracle_number(literal)
    if value_num is not None and literal_num is not None:
        return value_num <= literal_num if op is QueryOp.LTE else value_num >= literal_num
    value_min, literal_min = _oracle_minutes(value), _oracle_minutes(literal)
    if value_min is not None and literal_min is not None:
        return value_min <= literal_min if op is QueryOp.LTE else value_min >= literal_min
    return value <= literal if op is QueryOp.LTE else value >= literal


def brute_force(query: KbQuery, catalog: KbCatalog) -> KbResult:
    """Same semantics as execute(), computed by a naive scan over row dicts."""
    table = catalog.table(query.table)
    for pred in query.predicates:
        _oracle_resolve(table.attributes, pred.attribute, table.name)
    if query.projection is None:
        out_attrs = tuple(table.attributes)
    else:
        out_attrs = tuple(
            _oracle_resolve(table.attributes, a, table.name) for a in query.projection
        )

    kept: list[dict[str, str]] = []
    for row in table.rows:
        record = dict(zip(table.attributes, row))
        ok = True
        for pred in query.predicates:
            attr = _oracle_resolve(table.attributes, pred.attribute, table.name)
            if not _oracle_holds(record[attr], pred.op, pred.literal):
                ok = False
                break
        if ok:
            kept.append(record)

    truncated = False
    if query.limit is not None and len(kept) > query.limit:
        truncated = True
        kept = kept[: query.limit]

    rows = tuple(tuple(record[a] for a in out_attrs) for record in kept)
    return KbResult(attributes=out_attrs, rows=rows, truncated=truncated)
