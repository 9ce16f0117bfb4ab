"""Prompt construction: intent/state/response inputs, act verbalization, KB-to-text."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

from ..dialogue import DialogueContext
from ..kb.catalog import KbCatalog
from .templates import PromptError, TemplateId, get_template


class IcMode(str, Enum):
    SINGLE = "single"
    TOP3 = "top3"


class DstSetting(str, Enum):
    ALL_SLOTS = "all_slots"
    DOMAIN_SLOTS = "domain_slots"


class EmptyLabels(PromptError):
    pass


class EmptyActs(PromptError):
    pass


class UnknownDomain(PromptError):
    pass


# Frozen in-context example blocks shipped with the templates.
PROXY_BS_EXAMPLE_BLOCK = (
    "\n"
    "USER: I need fruits.\n"
    "SYSTEM: Do you have any preferences?\n"
    "USER: Yes, apples if possible. How expensive are they?\n"
    "Need: Information about pricerange for apple"
)

E2E_RG_EXAMPLE_BLOCK = (
    "USER: I need a place to fish.\n"
    "SYSTEM: Any preference in the type of fish?\n"
    "USER: Preferably salmons, but sardines are also fine.\n"
    "ACT: Blue Lake, 37th Avenue\n"
    "SYSTEM: How about in blue lake, 37th avenue?"
)


@dataclass(frozen=True)
class SlotCatalog:
    """The known (domain, slot) pairs; slot casing is kept as in the dataset."""

    slots: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple((d, s) for d, s in self.slots))
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("duplicate (domain, slot) pairs")

    def domains(self) -> list[str]:
        seen: dict[str, None] = {}
        for d, _ in self.slots:
            seen.setdefault(d)
        return list(seen)

    def for_domain(self, domain: str) -> "SlotCatalog":
        subset = tuple((d, s) for d, s in self.slots if d == domain)
        if not subset:
            raise UnknownDomain(f"no slots for domain {domain!r}")
        return SlotCatalog(subset)

    def render(self) -> str:
        ordered = sorted(self.slots, key=lambda p: (p[0].lower(), p[1].lower()))
        return ", ".join(f"{d}-{s}" for d, s in ordered)

    def key_set(self) -> frozenset[str]:
        """Lowercased "domain-slot" keys, for matching parsed predictions."""
        return frozenset(f"{d}-{s}".lower() for d, s in self.slots)


@dataclass(frozen=True)
class SystemAct:
    act_type: str
    slot: str = ""
    value: str = ""


@dataclass(frozen=True)
class SystemActSet:
    acts: tuple[SystemAct, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "acts", tuple(self.acts))

    def __bool__(self) -> bool:
        return bool(self.acts)


def verbalize_acts(acts: SystemActSet) -> str:
    """Turn system acts into imperative sentences.

    Recommend acts merge their values into one sentence ("Recommend the user
    for free, castle galleries."); Inform acts verbalize per slot; everything
    else falls back to "ActType the user that SLOT is VALUE.".
    """
    sentences: list[str] = []
    recommend_values: list[str] = []
    recommend_pos: int | None = None
    for act in acts.acts:
        kind = act.act_type.strip().lower()
        if kind == "recommend":
            if recommend_pos is None:
                recommend_pos = len(sentences)
                sentences.append("")  # placeholder, filled below
            recommend_values.append(act.value or act.slot)
        elif kind == "inform":
            sentences.append(f"Inform the user that the {act.slot} is {act.value}.")
        else:
            sentences.append(f"{act.act_type.strip().capitalize()} the user that {act.slot} is {act.value}.")
    if recommend_pos is not None:
        sentences[recommend_pos] = f"Recommend the user for {', '.join(recommend_values)}."
    return " ".join(sentences)


def build_ic_prompt(labels: Sequence[str], utterance: str, mode: IcMode = IcMode.SINGLE) -> str:
    if not labels:
        raise EmptyLabels("labels must be non-empty")
    block = "\n".join(f"{i} {label}" for i, label in enumerate(labels))
    tid = TemplateId.IC_SINGLE if IcMode(mode) is IcMode.SINGLE else TemplateId.IC_MULTI
    return get_template(tid).render({"INTENTS": block, "SENTENCE": utterance})


def build_dst_prompt(
    catalog: SlotCatalog,
    context: DialogueContext,
    setting: DstSetting = DstSetting.ALL_SLOTS,
    active_domain: str = "",
) -> str:
    if DstSetting(setting) is DstSetting.DOMAIN_SLOTS:
        catalog = catalog.for_domain(active_domain)
    return get_template(TemplateId.DST).render(
        {"SLOTS": catalog.render(), "CONTEXT": context.render()}
    )


def build_rg_prompt(acts: SystemActSet, context: DialogueContext) -> str:
    if not acts:
        raise EmptyActs("acts must be non-empty")
    return get_template(TemplateId.RG_MODULAR).render(
        {"CONTEXT": context.render(), "ACT": verbalize_acts(acts)}
    )


def kb_to_text(
    catalog: KbCatalog,
    max_value_len: int = 100,
    drop_attributes: Iterable[str] = (),
) -> str:
    """Serialize the catalog for in-prompt use.

    Rows render as "attr: value, ..." lines under a table-name header; dropped
    attributes and over-long values are omitted. Tables sort by name, row
    order is preserved.
    """
    if max_value_len < 1:
        raise ValueError("max_value_len must be >= 1")
    dropped = {a.lower() for a in drop_attributes}
    blocks: list[str] = []
    for name in sorted(catalog.tables):
        table = catalog.tables[name]
        lines = [f"{name}:"]
        for row in table.rows:
            parts = [
                f"{attr}: {value}"
                for attr, value in zip(table.attributes, row)
                if attr.lower() not in dropped and len(value) <= max_value_len
            ]
            lines.append(", ".join(parts))
        blocks.append("\n".join(lines))
    return "\n".join(blocks)


def fit_context_to_window(
    build: Callable[[DialogueContext], str],
    context: DialogueContext,
    window_chars: int | None,
) -> tuple[str, DialogueContext]:
    """Drop oldest turn pairs until the built prompt fits the window.

    The latest user turn is never dropped; raises PromptError when even the
    minimal context does not fit.
    """
    prompt = build(context)
    if window_chars is None:
        return prompt, context
    while len(prompt) > window_chars:
        smaller = context.drop_oldest_pair()
        if smaller is context or not smaller.turns:
            raise PromptError(
                f"prompt of {len(prompt)} chars exceeds window {window_chars} "
                "even with minimal context"
            )
        context = smaller
        prompt = build(context)
    return prompt, context
