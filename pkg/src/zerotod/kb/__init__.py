"""Knowledge-base engine: storage, query DSL, executor, and scan oracle."""

from .catalog import (
    KbCatalog,
    KbError,
    KbParseError,
    KbTable,
    SchemaError,
    UnknownAttribute,
    UnknownTable,
    load_catalog,
    normalize_kb_value,
)
from .executor import NO_MATCH_SENTINEL, KbResult, execute, result_to_text
from .oracle import brute_force
from .query import (
    KbQuery,
    MalformedPredicate,
    NoQueryFound,
    Predicate,
    QueryOp,
    parse_query,
    print_query,
)

__all__ = [
    "KbCatalog",
    "KbError",
    "KbParseError",
    "KbQuery",
    "KbResult",
    "KbTable",
    "MalformedPredicate",
    "NO_MATCH_SENTINEL",
    "NoQueryFound",
    "Predicate",
    "QueryOp",
    "SchemaError",
    "UnknownAttribute",
    "UnknownTable",
    "brute_force",
    "execute",
    "load_catalog",
    "normalize_kb_value",
    "parse_query",
    "print_query",
    "result_to_text",
]
