"""Constrained query DSL: AST, parser tolerant of surrounding prose, canonical printer.

Grammar (keywords case-insensitive, literals optionally quoted):

    FROM <table> [WHERE <attr> <op> <literal> {AND <attr> <op> <literal>}]
                 [SELECT <attr>{, <attr>} | *] [LIMIT <n>]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .catalog import KbError


class QueryOp(str, Enum):
    EQ = "EQ"
    NEQ = "NEQ"
    LTE = "LTE"
    GTE = "GTE"
    CONTAINS = "CONTAINS"


_SYMBOL_OPS = {
    "==": QueryOp.EQ,
    "=": QueryOp.EQ,
    "!=": QueryOp.NEQ,
    "<>": QueryOp.NEQ,
    "<=": QueryOp.LTE,
    ">=": QueryOp.GTE,
    "~": QueryOp.CONTAINS,
}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class NoQueryFound(KbError):
    pass


class MalformedPredicate(KbError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


def _check_text(kind: str, value: str) -> str:
    if not value:
        raise ValueError(f"{kind} must be non-empty")
    if '"' in value or "\n" in value:
        raise ValueError(f"{kind} must not contain double quotes or newlines: {value!r}")
    return value


@dataclass(frozen=True)
class Predicate:
    attribute: str
    op: QueryOp
    literal: str

    def __post_init__(self) -> None:
        _check_text("attribute", self.attribute)
        _check_text("literal", self.literal)
        object.__setattr__(self, "op", QueryOp(self.op))


@dataclass(frozen=True)
class KbQuery:
    table: str
    predicates: tuple[Predicate, ...] = ()
    projection: tuple[str, ...] | None = None  # None means ALL
    limit: int | None = None

    def __post_init__(self) -> None:
        if not _IDENT.fullmatch(self.table):
            raise ValueError(f"table name must be an identifier: {self.table!r}")
        object.__setattr__(self, "predicates", tuple(self.predicates))
        if self.projection is not None:
            proj = tuple(self.projection)
            if not proj:
                raise ValueError("projection must be None (all) or a non-empty attribute list")
            for attr in proj:
                _check_text("projection attribute", attr)
            object.__setattr__(self, "projection", proj)
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be positive")


def _fmt_name(name: str) -> str:
    return name if _IDENT.fullmatch(name) else f'"{name}"'


def print_query(query: KbQuery) -> str:
    """Canonical text form; parse_query(print_query(q)) == q."""
    parts = [f"FROM {query.table}"]
    if query.predicates:
        preds = " AND ".join(
            f'{_fmt_name(p.attribute)} {p.op.value} "{p.literal}"' for p in query.predicates
        )
        parts.append(f"WHERE {preds}")
    if query.projection is not None:
        parts.append("SELECT " + ", ".join(_fmt_name(a) for a in query.projection))
    if query.limit is not None:
        parts.append(f"LIMIT {query.limit}")
    return " ".join(parts)


class _Cursor:
    def __init__(self, text: str, pos: int) -> None:
        self.text = text
        self.pos = pos

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def keyword(self, word: str) -> bool:
        """Consume a case-insensitive keyword at the cursor, if present."""
        self.skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos : end].upper() == word and (
            end >= len(self.text) or not (self.text[end].isalnum() or self.text[end] == "_")
        ):
            self.pos = end
            return True
        return False

    def ident(self) -> str | None:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def quoted(self) -> str | None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] not in "\"'":
            return None
        quote = self.text[self.pos]
        end = self.text.find(quote, self.pos + 1)
        if end == -1:
            return None
        value = self.text[self.pos + 1 : end]
        self.pos = end + 1
        return value

    def name(self) -> str | None:
        """Quoted string or bare identifier (attribute names may contain spaces when quoted)."""
        return self.quoted() if self._at_quote() else self.ident()

    def bare_literal(self) -> str | None:
        self.skip_ws()
        m = re.compile(r"[^\s,]+").match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0).rstrip(".,;?!")

    def literal(self) -> str | None:
        if self._at_quote():
            return self.quoted()
        return self.bare_literal()

    def _at_quote(self) -> bool:
        self.skip_ws()
        return self.pos < len(self.text) and self.text[self.pos] in "\"'"

    def operator(self) -> QueryOp | None:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if m and m.group(0).upper() in QueryOp.__members__:
            self.pos = m.end()
            return QueryOp[m.group(0).upper()]
        for symbol in ("==", "!=", "<>", "<=", ">=", "=", "~"):
            if self.text.startswith(symbol, self.pos):
                self.pos += len(symbol)
                return _SYMBOL_OPS[symbol]
        return None

    def consume(self, char: str) -> bool:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == char:
            self.pos += 1
            return True
        return False


def _parse_at(text: str, start: int) -> tuple[KbQuery, bool]:
    """Parse one query starting at a FROM keyword; returns (query, has_clause)."""
    cur = _Cursor(text, start)
    if not cur.keyword("FROM"):
        raise NoQueryFound("not at a FROM keyword")
    table = cur.ident()
    if table is None:
        raise NoQueryFound("no table name after FROM")

    predicates: list[Predicate] = []
    projection: tuple[str, ...] | None = None
    limit: int | None = None
    has_clause = False

    if cur.keyword("WHERE"):
        has_clause = True
        while True:
            attr = cur.name()
            if attr is None:
                raise MalformedPredicate("expected attribute name", cur.pos)
            op = cur.operator()
            if op is None:
                raise MalformedPredicate(f"bad operator after attribute {attr!r}", cur.pos)
            lit = cur.literal()
            if lit is None or not lit:
                raise MalformedPredicate(f"missing literal for attribute {attr!r}", cur.pos)
            try:
                predicates.append(Predicate(attribute=attr, op=op, literal=lit))
            except ValueError as exc:
                raise MalformedPredicate(str(exc), cur.pos) from None
            if not cur.keyword("AND"):
                break

    if cur.keyword("SELECT"):
        has_clause = True
        if cur.consume("*"):
            projection = None
        else:
            attrs: list[str] = []
            while True:
                attr = cur.name()
                if attr is None:
                    raise MalformedPredicate("expected attribute in SELECT list", cur.pos)
                attrs.append(attr)
                if not cur.consume(","):
                    break
            projection = tuple(attrs)

    if cur.keyword("LIMIT"):
        has_clause = True
        cur.skip_ws()
        m = re.compile(r"\d+").match(cur.text, cur.pos)
        if not m:
            raise MalformedPredicate("expected integer after LIMIT", cur.pos)
        limit = int(m.group(0))

    try:
        query = KbQuery(table=table, predicates=tuple(predicates), projection=projection, limit=limit)
    except ValueError as exc:
        raise MalformedPredicate(str(exc), cur.pos) from None
    return query, has_clause


def parse_query(text: str) -> KbQuery:
    """Extract and parse the first query in possibly-prose-wrapped text.

    Anchors on every FROM keyword; prefers the first anchor that parses with
    at least one clause, then the first bare "FROM table" scan. Raises
    MalformedPredicate (with offset) when the only candidates are broken, and
    NoQueryFound when nothing resembles a query.
    """
    anchors = [m.start() for m in re.finditer(r"\bFROM\b", text, re.IGNORECASE)]
    if not anchors:
        raise NoQueryFound("no FROM keyword in text")

    bare: KbQuery | None = None
    first_malformed: MalformedPredicate | None = None
    for pos in anchors:
        try:
            query, has_clause = _parse_at(text, pos)
        except MalformedPredicate as exc:
            if first_malformed is None:
                first_malformed = exc
            continue
        except NoQueryFound:
            continue
        if has_clause:
            return query
        if bare is None:
            bare = query
    if bare is not None:
        return bare
    if first_malformed is not None:
        raise first_malformed
    raise NoQueryFound("no parseable query in text")
