"""MultiWOZ-format ingestion: dialogues, gold states, goals, acts, and the KB.

Files are consumed in the released layout: ``data.json`` with per-dialogue
goal and log, a test-split listing, and one ``db/<domain>_db.json`` per
KB-backed domain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..dialogue import DialogueContext, Speaker, Turn
from ..dst.belief import BeliefState
from ..dst.normalize import normalize_value
from ..kb.catalog import KbCatalog, KbParseError, load_catalog
from ..metrics.taskcomp import DomainGoal, GoalSpec
from ..prompts.builders import SystemAct, SystemActSet

KNOWN_DOMAINS = {"attraction", "hotel", "restaurant", "taxi", "train", "police", "hospital", "bus"}
KB_DOMAINS = {"attraction", "hotel", "restaurant", "train"}


class DataError(Exception):
    pass


class MissingFile(DataError):
    def __init__(self, path: Path | str) -> None:
        super().__init__(f"missing file: {path}")
        self.path = Path(path)


class UnknownDomain(DataError):
    pass


@dataclass(frozen=True)
class AnnotatedDialogue:
    dialogue_id: str
    turns: DialogueContext
    gold_states: tuple[BeliefState, ...]
    gold_acts: tuple[SystemActSet, ...]
    gold_responses: tuple[str, ...]
    goal: GoalSpec
    domains: frozenset[str]


def mini_corpus_dir() -> Path:
    """Location of the bundled synthetic mini-corpus."""
    return Path(str(resources.files("zerotod.data") / "mini"))


def _goal_from_raw(raw_goal: dict) -> tuple[GoalSpec | None, frozenset[str]]:
    domains: dict[str, DomainGoal] = {}
    for domain, spec in raw_goal.items():
        if domain not in KNOWN_DOMAINS or not isinstance(spec, dict) or not spec:
            continue
        constraints = {
            str(slot): str(value)
            for slot, value in (spec.get("info") or {}).items()
            if isinstance(value, str) and value
        }
        requestables = frozenset(str(r).lower() for r in (spec.get("reqt") or ()))
        booking = {
            str(slot): str(value)
            for slot, value in (spec.get("book") or {}).items()
            if isinstance(value, str) and value
        }
        domains[domain] = DomainGoal(constraints, requestables, booking)
    if not domains:
        return None, frozenset()
    return GoalSpec(domains), frozenset(domains)


def _state_from_metadata(metadata: dict) -> BeliefState:
    entries: dict[str, str] = {}
    for domain, tracked in metadata.items():
        if not isinstance(tracked, dict):
            continue
        for slot, value in (tracked.get("semi") or {}).items():
            if isinstance(value, str) and value:
                entries[f"{domain}-{slot}"] = normalize_value(f"{domain}-{slot}", value)
        for slot, value in (tracked.get("book") or {}).items():
            if slot == "booked" or not isinstance(value, str) or not value:
                continue
            entries[f"{domain}-{slot}"] = normalize_value(f"{domain}-{slot}", value)
    return BeliefState.build(entries)


def _acts_from_raw(raw_acts: dict) -> SystemActSet:
    acts: list[SystemAct] = []
    if isinstance(raw_acts, dict):
        for act_name, pairs in raw_acts.items():
            act_type = str(act_name).split("-")[-1]
            if not isinstance(pairs, list):
                continue
            for pair in pairs:
                slot, value = (list(pair) + ["", ""])[:2]
                acts.append(SystemAct(act_type, str(slot), str(value)))
    return SystemActSet(tuple(acts))


def _read_split_listing(directory: Path) -> list[str]:
    for name in ("testListFile.json", "testListFile.txt"):
        path = directory / name
        if path.exists():
            return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    raise MissingFile(directory / "testListFile.json")


def load_multiwoz(directory: str | Path) -> tuple[list[AnnotatedDialogue], KbCatalog]:
    """Load the test split of a MultiWOZ-format directory plus its KB."""
    directory = Path(directory)
    data_path = directory / "data.json"
    if not data_path.exists():
        raise MissingFile(data_path)
    try:
        data = json.loads(data_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{data_path}: invalid JSON: {exc}") from exc

    listed = _read_split_listing(directory)
    missing_ids = [d for d in listed if d not in data]
    if missing_ids:
        raise DataError(f"test listing names unknown dialogues: {missing_ids[:5]}")

    dialogues: list[AnnotatedDialogue] = []
    referenced_domains: set[str] = set()
    for dialogue_id in listed:
        raw = data[dialogue_id]
        goal, domains = _goal_from_raw(raw.get("goal", {}))
        if goal is None:
            raise DataError(f"{dialogue_id}: no usable goal domains")
        referenced_domains |= domains

        turns: list[Turn] = []
        gold_states: list[BeliefState] = []
        gold_acts: list[SystemActSet] = []
        gold_responses: list[str] = []
        for i, entry in enumerate(raw.get("log", [])):
            speaker = Speaker.USER if i % 2 == 0 else Speaker.SYSTEM
            turns.append(Turn(speaker, entry.get("text", "")))
            if speaker is Speaker.SYSTEM:
                gold_states.append(_state_from_metadata(entry.get("metadata", {})))
                gold_acts.append(_acts_from_raw(entry.get("dialog_act", {})))
                gold_responses.append(entry.get("text", ""))
        dialogues.append(
            AnnotatedDialogue(
                dialogue_id=dialogue_id,
                turns=DialogueContext(tuple(turns), dialogue_id),
                gold_states=tuple(gold_states),
                gold_acts=tuple(gold_acts),
                gold_responses=tuple(gold_responses),
                goal=goal,
                domains=domains,
            )
        )

    db_dir = directory / "db"
    manifest: dict[str, Path] = {}
    for domain in sorted(referenced_domains & KB_DOMAINS):
        path = db_dir / f"{domain}_db.json"
        if not path.exists():
            raise MissingFile(path)
        manifest[domain] = path
    try:
        catalog = load_catalog(manifest)
    except KbParseError as exc:
        raise DataError(str(exc)) from exc
    return dialogues, catalog


def filter_single_domain(dialogues: list[AnnotatedDialogue], domain: str) -> list[AnnotatedDialogue]:
    """Dialogues whose goal covers exactly the given domain."""
    if domain not in {"attraction", "hotel", "restaurant", "taxi", "train"}:
        raise UnknownDomain(f"not an evaluated domain: {domain!r}")
    return [d for d in dialogues if d.domains == frozenset({domain})]


def multi_domain_remainder(dialogues: list[AnnotatedDialogue]) -> list[AnnotatedDialogue]:
    return [d for d in dialogues if len(d.domains) != 1]
