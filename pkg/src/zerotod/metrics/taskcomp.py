"""Task-completion scoring: Inform and Success rates.

Normative rules (restating the standard MultiWOZ-evaluator semantics this
module follows):

* A domain is *informed* when some offered entity — a KB row whose name
  surfaced in a system response, resolved via the pre-delexicalization
  record — satisfies every goal constraint that names a KB attribute
  ("dontcare" constraints always hold). Domains whose table has no name
  attribute (or no table at all, e.g. taxi) are vacuously informed.
* A dialogue is informed when all its goal domains are informed.
* A dialogue is *successful* when it is informed and, for every requestable
  slot in the goal, the slot's placeholder appears somewhere in the
  delexicalized system responses. Success therefore implies inform.
* Rates are averaged over dialogues; per-domain rates average over the
  dialogues whose goal mentions the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from ..dst.normalize import normalize_value
from ..kb.catalog import KbCatalog
from .delex import DEFAULT_VALUE_MAP, delexicalize_tracking
from .dst import MetricError

REQUESTABLE_PLACEHOLDERS: Mapping[str, str] = {
    "address": "[value_address]",
    "phone": "[value_phone]",
    "postcode": "[value_postcode]",
    "pricerange": "[value_pricerange]",
    "area": "[value_area]",
    "food": "[value_food]",
    "name": "[value_name]",
    "type": "[value_type]",
    "stars": "[value_stars]",
    "day": "[value_day]",
    "time": "[value_time]",
    "leaveat": "[value_time]",
    "arriveby": "[value_time]",
    "duration": "[value_time]",
    "reference": "[value_reference]",
    "people": "[value_people]",
}


class MissingGoal(MetricError):
    pass


@dataclass(frozen=True)
class DomainGoal:
    constraints: Mapping[str, str] = field(default_factory=dict)
    requestables: frozenset[str] = frozenset()
    booking: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", MappingProxyType(dict(self.constraints)))
        object.__setattr__(self, "requestables", frozenset(r.strip().lower() for r in self.requestables))
        object.__setattr__(self, "booking", MappingProxyType(dict(self.booking)))


@dataclass(frozen=True)
class GoalSpec:
    domains: Mapping[str, DomainGoal]

    def __post_init__(self) -> None:
        if not self.domains:
            raise MissingGoal("goal must cover at least one domain")
        normalized = {}
        for domain, goal in self.domains.items():
            constraints = {
                slot.strip().lower(): normalize_value(f"{domain}-{slot}", value)
                for slot, value in goal.constraints.items()
            }
            normalized[domain.strip().lower()] = DomainGoal(constraints, goal.requestables, goal.booking)
        object.__setattr__(self, "domains", MappingProxyType(normalized))


@dataclass(frozen=True)
class DialogueCompletion:
    informed: bool
    successful: bool
    per_domain: Mapping[str, tuple[bool, bool]]


@dataclass(frozen=True)
class TaskCompletion:
    inform: float
    success: float
    per_domain: Mapping[str, tuple[float, float]]
    dialogue_count: int


def _entity_satisfies(catalog: KbCatalog, domain: str, name: str, constraints: Mapping[str, str]) -> bool:
    table = catalog.tables.get(domain)
    if table is None or "name" not in table.attributes:
        return True
    name_idx = table.attributes.index("name")
    attr_index = {a.lower(): i for i, a in enumerate(table.attributes)}
    for row in table.rows:
        if row[name_idx] != name:
            continue
        ok = True
        for slot, wanted in constraints.items():
            if wanted == "dontcare":
                continue
            idx = attr_index.get(slot)
            if idx is None:
                continue  # booking-style constraint, not an entity attribute
            if row[idx] != wanted:
                ok = False
                break
        if ok:
            return True
    return False


def _domain_has_entities(catalog: KbCatalog, domain: str) -> bool:
    table = catalog.tables.get(domain)
    return table is not None and "name" in table.attributes


def evaluate_dialogue(
    responses: Sequence[str],
    goal: GoalSpec,
    catalog: KbCatalog,
    value_map: Mapping[str, tuple[str, ...]] | None = None,
) -> DialogueCompletion:
    """Score one dialogue from its raw system responses and goal."""
    value_map = value_map or DEFAULT_VALUE_MAP
    delexed: list[str] = []
    offered: dict[str, set[str]] = {}
    for response in responses:
        text, offers = delexicalize_tracking(response, catalog, value_map)
        delexed.append(text)
        for domain, names in offers.items():
            offered.setdefault(domain, set()).update(names)
    joined = " ".join(delexed)

    per_domain: dict[str, tuple[bool, bool]] = {}
    for domain, domain_goal in goal.domains.items():
        if _domain_has_entities(catalog, domain):
            informed = any(
                _entity_satisfies(catalog, domain, name, domain_goal.constraints)
                for name in offered.get(domain, ())
            )
        else:
            informed = True
        met = all(
            REQUESTABLE_PLACEHOLDERS.get(req, "\x00never") in joined
            for req in domain_goal.requestables
        )
        per_domain[domain] = (informed, informed and met)

    informed_all = all(flags[0] for flags in per_domain.values())
    success_all = informed_all and all(flags[1] for flags in per_domain.values())
    return DialogueCompletion(informed=informed_all, successful=success_all, per_domain=per_domain)


def inform_success(
    dialogues: Sequence[tuple[Sequence[str], GoalSpec]],
    catalog: KbCatalog,
    value_map: Mapping[str, tuple[str, ...]] | None = None,
) -> TaskCompletion:
    """Overall and per-domain (inform, success) over (responses, goal) dialogues."""
    if not dialogues:
        raise MissingGoal("need at least one dialogue")
    for _, goal in dialogues:
        if goal is None:
            raise MissingGoal("every dialogue needs a goal")

    results = [evaluate_dialogue(responses, goal, catalog, value_map) for responses, goal in dialogues]
    inform_rate = sum(r.informed for r in results) / len(results)
    success_rate = sum(r.successful for r in results) / len(results)

    domain_hits: dict[str, list[tuple[bool, bool]]] = {}
    for result in results:
        for domain, flags in result.per_domain.items():
            domain_hits.setdefault(domain, []).append(flags)
    per_domain = {
        domain: (
            sum(f[0] for f in flags) / len(flags),
            sum(f[1] for f in flags) / len(flags),
        )
        for domain, flags in sorted(domain_hits.items())
    }
    return TaskCompletion(
        inform=inform_rate,
        success=success_rate,
        per_domain=per_domain,
        dialogue_count=len(results),
    )
