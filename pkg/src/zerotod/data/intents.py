"""Intent-dataset ingestion: banking-style CSV and the 150-intent JSON layout."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .multiwoz import DataError, MissingFile

OOS_LABEL = "oos"


class IntentDatasetKind(str, Enum):
    BANKING77 = "banking77"
    CLINC150 = "clinc150"


class Split(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class LabelMismatch(DataError):
    pass


@dataclass(frozen=True)
class LabeledUtterance:
    text: str
    gold_label: str
    split: Split


def _load_banking(directory: Path) -> tuple[list[LabeledUtterance], list[str], None]:
    categories_path = directory / "categories.json"
    declared: list[str] | None = None
    if categories_path.exists():
        declared = sorted(json.loads(categories_path.read_text(encoding="utf-8")))

    utterances: list[LabeledUtterance] = []
    seen_labels: set[str] = set()
    for filename, split in (("train.csv", Split.TRAIN), ("test.csv", Split.TEST)):
        path = directory / filename
        if not path.exists():
            if split is Split.TEST:
                raise MissingFile(path)
            continue
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"text", "category"} <= set(reader.fieldnames):
                raise DataError(f"{path}: expected text,category columns")
            for row in reader:
                label = row["category"].strip()
                if declared is not None and label not in declared:
                    raise LabelMismatch(f"{path}: label {label!r} outside declared set")
                seen_labels.add(label)
                utterances.append(LabeledUtterance(row["text"], label, split))
    labels = declared if declared is not None else sorted(seen_labels)
    return utterances, labels, None


def _load_clinc(directory: Path) -> tuple[list[LabeledUtterance], list[str], str]:
    path = directory / "data_full.json"
    if not path.exists():
        raise MissingFile(path)
    data = json.loads(path.read_text(encoding="utf-8"))

    split_map = {"train": Split.TRAIN, "val": Split.DEV, "test": Split.TEST}
    utterances: list[LabeledUtterance] = []
    labels: set[str] = set()
    for key, rows in data.items():
        is_oos = key.startswith("oos_")
        split_name = key[4:] if is_oos else key
        split = split_map.get(split_name)
        if split is None:
            continue
        for text, label in rows:
            label = OOS_LABEL if is_oos else str(label)
            if not is_oos:
                labels.add(label)
            utterances.append(LabeledUtterance(str(text), label, split))
    return utterances, sorted(labels), OOS_LABEL


def load_intent_dataset(
    kind: IntentDatasetKind | str, directory: str | Path
) -> tuple[list[LabeledUtterance], list[str], str | None]:
    """Returns (utterances, in-scope label set, out-of-scope label or None)."""
    directory = Path(directory)
    if not directory.exists():
        raise MissingFile(directory)
    kind = IntentDatasetKind(kind)
    if kind is IntentDatasetKind.BANKING77:
        return _load_banking(directory)
    return _load_clinc(directory)
