"""Template registry: resource-file bodies with {{NAME}} placeholders.

Bodies live in plain-text files (not source constants) so their exact bytes
stay auditable; the manifest maps each id to its file and required bindings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Mapping

PLACEHOLDER = re.compile(r"\{\{([A-Z][A-Z0-9_]*)\}\}")


class TemplateId(str, Enum):
    IC_SINGLE = "IC_SINGLE"
    IC_MULTI = "IC_MULTI"
    DST = "DST"
    RG_MODULAR = "RG_MODULAR"
    RG_NAIVE = "RG_NAIVE"
    PROXY_BS = "PROXY_BS"
    KB_INTERACT_INIT = "KB_INTERACT_INIT"
    E2E_RG = "E2E_RG"


class PromptError(Exception):
    pass


class MissingBinding(PromptError):
    def __init__(self, name: str) -> None:
        super().__init__(f"missing binding: {name}")
        self.name = name


@dataclass(frozen=True)
class PromptTemplate:
    id: TemplateId
    body: str
    required_bindings: frozenset[str]

    def render(self, bindings: Mapping[str, str]) -> str:
        missing = self.required_bindings - set(bindings)
        if missing:
            raise MissingBinding(sorted(missing)[0])

        def _sub(m: re.Match) -> str:
            name = m.group(1)
            if name not in bindings:
                raise MissingBinding(name)
            return bindings[name]

        return PLACEHOLDER.sub(_sub, self.body)


def render(template: PromptTemplate, bindings: Mapping[str, str]) -> str:
    """Placeholder substitution only; deterministic, no other rewriting."""
    return template.render(bindings)


def _read_resource(relpath: str) -> str:
    root = resources.files("zerotod.prompts") / "resources"
    return (root / relpath).read_text(encoding="utf-8")


def _load_all() -> dict[TemplateId, PromptTemplate]:
    manifest = json.loads(_read_resource("manifest.json"))
    out: dict[TemplateId, PromptTemplate] = {}
    for item in manifest["templates"]:
        tid = TemplateId(item["id"])
        body = _read_resource(item["path"])
        required = frozenset(item["required"])
        found = frozenset(m.group(1) for m in PLACEHOLDER.finditer(body))
        if found != required:
            raise PromptError(
                f"template {tid.value}: manifest bindings {sorted(required)} "
                f"do not match body placeholders {sorted(found)}"
            )
        out[tid] = PromptTemplate(id=tid, body=body, required_bindings=required)
    return out


_TEMPLATES: dict[TemplateId, PromptTemplate] | None = None


def get_template(tid: TemplateId) -> PromptTemplate:
    global _TEMPLATES
    if _TEMPLATES is None:
        _TEMPLATES = _load_all()
    return _TEMPLATES[TemplateId(tid)]


def internal_prompt(name: str, bindings: Mapping[str, str]) -> str:
    """Render one of the pipeline-internal prompt files (query/extract/next-action)."""
    body = _read_resource(f"internal/{name}.txt")

    def _sub(m: re.Match) -> str:
        key = m.group(1)
        if key not in bindings:
            raise MissingBinding(key)
        return bindings[key]

    return PLACEHOLDER.sub(_sub, body)
