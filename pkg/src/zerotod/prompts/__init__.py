"""Prompt templates, binding/rendering, and input-construction helpers."""

from .builders import (
    E2E_RG_EXAMPLE_BLOCK,
    PROXY_BS_EXAMPLE_BLOCK,
    DstSetting,
    EmptyActs,
    EmptyLabels,
    IcMode,
    SlotCatalog,
    SystemAct,
    SystemActSet,
    UnknownDomain,
    build_dst_prompt,
    build_ic_prompt,
    build_rg_prompt,
    fit_context_to_window,
    kb_to_text,
    verbalize_acts,
)
from .templates import (
    MissingBinding,
    PromptError,
    PromptTemplate,
    TemplateId,
    get_template,
    internal_prompt,
    render,
)

__all__ = [
    "DstSetting",
    "E2E_RG_EXAMPLE_BLOCK",
    "EmptyActs",
    "EmptyLabels",
    "IcMode",
    "MissingBinding",
    "PROXY_BS_EXAMPLE_BLOCK",
    "PromptError",
    "PromptTemplate",
    "SlotCatalog",
    "SystemAct",
    "SystemActSet",
    "TemplateId",
    "UnknownDomain",
    "build_dst_prompt",
    "build_ic_prompt",
    "build_rg_prompt",
    "fit_context_to_window",
    "get_template",
    "internal_prompt",
    "kb_to_text",
    "render",
    "verbalize_acts",
]
