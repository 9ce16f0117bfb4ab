"""Slot vocabulary for the five evaluated MultiWOZ domains (dataset-native casing)."""

from __future__ import annotations

from ..prompts.builders import SlotCatalog

MWOZ_SLOT_PAIRS: tuple[tuple[str, str], ...] = (
    ("attraction", "area"),
    ("attraction", "name"),
    ("attraction", "type"),
    ("hotel", "area"),
    ("hotel", "day"),
    ("hotel", "internet"),
    ("hotel", "name"),
    ("hotel", "parking"),
    ("hotel", "people"),
    ("hotel", "pricerange"),
    ("hotel", "stars"),
    ("hotel", "stay"),
    ("hotel", "type"),
    ("restaurant", "area"),
    ("restaurant", "day"),
    ("restaurant", "food"),
    ("restaurant", "name"),
    ("restaurant", "people"),
    ("restaurant", "pricerange"),
    ("restaurant", "time"),
    ("taxi", "arriveBy"),
    ("taxi", "departure"),
    ("taxi", "destination"),
    ("taxi", "leaveAt"),
    ("train", "arriveBy"),
    ("train", "day"),
    ("train", "departure"),
    ("train", "destination"),
    ("train", "leaveAt"),
    ("train", "people"),
)

EVAL_DOMAINS = ("attraction", "hotel", "restaurant", "taxi", "train")

# slot names a goal may request, beyond the informables above
REQUESTABLE_SLOTS = frozenset(
    {
        "address",
        "area",
        "arriveby",
        "day",
        "duration",
        "entrance fee",
        "food",
        "internet",
        "leaveat",
        "name",
        "parking",
        "phone",
        "postcode",
        "price",
        "pricerange",
        "reference",
        "stars",
        "time",
        "trainid",
        "type",
    }
)


def requestable_vocabulary() -> frozenset[str]:
    """Every slot name a goal requestable may use (informables + requestables)."""
    return REQUESTABLE_SLOTS | frozenset(s.lower() for _, s in MWOZ_SLOT_PAIRS)


def mwoz_slot_catalog() -> SlotCatalog:
    return SlotCatalog(MWOZ_SLOT_PAIRS)
