"""Dataset ingestion: MultiWOZ-format dialogues/KB and intent corpora."""

from .intents import (
    OOS_LABEL,
    IntentDatasetKind,
    LabeledUtterance,
    LabelMismatch,
    Split,
    load_intent_dataset,
)
from .multiwoz import (
    AnnotatedDialogue,
    DataError,
    MissingFile,
    UnknownDomain,
    filter_single_domain,
    load_multiwoz,
    mini_corpus_dir,
    multi_domain_remainder,
)
from .slots import EVAL_DOMAINS, MWOZ_SLOT_PAIRS, mwoz_slot_catalog

__all__ = [
    "AnnotatedDialogue",
    "DataError",
    "EVAL_DOMAINS",
    "IntentDatasetKind",
    "LabelMismatch",
    "LabeledUtterance",
    "MWOZ_SLOT_PAIRS",
    "MissingFile",
    "OOS_LABEL",
    "Split",
    "UnknownDomain",
    "filter_single_domain",
    "load_intent_dataset",
    "load_multiwoz",
    "mini_corpus_dir",
    "multi_domain_remainder",
    "mwoz_slot_catalog",
]
