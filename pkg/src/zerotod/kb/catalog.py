"""Tabular knowledge-base storage: immutable tables keyed by domain."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping


class KbError(Exception):
    pass


class UnknownTable(KbError):
    pass


class UnknownAttribute(KbError):
    pass


class KbParseError(KbError):
    """A source file failed to parse; carries the file and, when known, the line."""

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None) -> None:
        loc = f"{path}" + (f":{line}" if line is not None else "") if path else ""
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class SchemaError(KbError):
    def __init__(self, message: str, row_index: int) -> None:
        super().__init__(f"row {row_index}: {message}")
        self.row_index = row_index


_TIME = re.compile(r"^(\d{1,2}):(\d{2})$")


def normalize_kb_value(value: object) -> str:
    """Lowercase text form of a raw KB value; times zero-pad to HH:MM."""
    if isinstance(value, str):
        text = value
    elif isinstance(value, bool):
        text = "yes" if value else "no"
    elif isinstance(value, (dict, list)):
        text = json.dumps(value, ensure_ascii=False, sort_keys=True)
    else:
        text = str(value)
    text = " ".join(text.strip().lower().split())
    m = _TIME.match(text)
    if m:
        text = f"{int(m.group(1)):02d}:{m.group(2)}"
    return text


@dataclass(frozen=True)
class KbTable:
    name: str
    attributes: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        attrs = tuple(self.attributes)
        if len(set(attrs)) != len(attrs):
            raise ValueError(f"table {self.name!r}: duplicate attribute names")
        rows = []
        for i, row in enumerate(self.rows):
            if len(row) != len(attrs):
                raise SchemaError(
                    f"expected {len(attrs)} values, got {len(row)} in table {self.name!r}", i
                )
            rows.append(tuple(normalize_kb_value(v) for v in row))
        object.__setattr__(self, "attributes", attrs)
        object.__setattr__(self, "rows", tuple(rows))

    def attribute_index(self, attribute: str) -> int:
        try:
            return self.attributes.index(attribute)
        except ValueError:
            raise UnknownAttribute(
                f"table {self.name!r} has no attribute {attribute!r}"
            ) from None


@dataclass(frozen=True)
class KbCatalog:
    tables: Mapping[str, KbTable]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tables", MappingProxyType(dict(self.tables)))

    def table(self, name: str) -> KbTable:
        try:
            return self.tables[name]
        except KeyError:
            raise UnknownTable(f"no table named {name!r}") from None

    def attribute_names(self) -> list[str]:
        """Union of attribute names across tables, first-seen order."""
        seen: dict[str, None] = {}
        for name in sorted(self.tables):
            for attr in self.tables[name].attributes:
                seen.setdefault(attr)
        return list(seen)


def _table_from_records(name: str, records: list, path: str | Path) -> KbTable:
    if not isinstance(records, list):
        raise KbParseError(f"expected a JSON array of row objects, got {type(records).__name__}", path)
    if not records:
        return KbTable(name=name, attributes=(), rows=())
    first = records[0]
    if not isinstance(first, dict):
        raise KbParseError("rows must be JSON objects", path)
    attributes = tuple(first.keys())
    rows = []
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise KbParseError(f"row {i} is not an object", path)
        missing = [a for a in attributes if a not in rec]
        extra = [k for k in rec if k not in attributes]
        if missing or extra:
            detail = []
            if missing:
                detail.append(f"missing {missing}")
            if extra:
                detail.append(f"unexpected {extra}")
            raise SchemaError("; ".join(detail) + f" in table {name!r}", i)
        rows.append(tuple(rec[a] for a in attributes))
    return KbTable(name=name, attributes=attributes, rows=tuple(rows))


def load_catalog(source: Mapping[str, str | Path] | str | Path) -> KbCatalog:
    """Load a catalog from a {domain: json-file} manifest (mapping or JSON file path).

    Each domain file is a JSON array of attribute->value objects; values are
    lowercase-normalized and recognizable times zero-padded at load.
    """
    if isinstance(source, (str, Path)):
        manifest_path = Path(source)
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise KbParseError("catalog manifest not found", manifest_path) from None
        except json.JSONDecodeError as exc:
            raise KbParseError(f"invalid JSON: {exc}", manifest_path, exc.lineno) from None
        base = manifest_path.parent
        source = {domain: base / rel for domain, rel in manifest.items()}

    tables: dict[str, KbTable] = {}
    for domain, path in source.items():
        path = Path(path)
        try:
            records = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise KbParseError("db file not found", path) from None
        except json.JSONDecodeError as exc:
            raise KbParseError(f"invalid JSON: {exc}", path, exc.lineno) from None
        tables[domain] = _table_from_records(domain, records, path)
    return KbCatalog(tables=tables)
