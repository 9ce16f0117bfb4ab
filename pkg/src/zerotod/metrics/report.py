"""Aggregate scoring over prediction dumps, with table/JSON/CSV rendering."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..dst.belief import BeliefState
from ..dst.intents import IntentPrediction
from ..kb.catalog import KbCatalog
from .bleu import corpus_bleu
from .diversity import TooShort, hdd, mattr, mtld, vocd
from .dst import MetricError, jga, slot_f1
from .intent import intent_accuracy
from .taskcomp import GoalSpec, inform_success

_WORD = re.compile(r"[\w']+")


class AlignmentError(MetricError):
    def __init__(self, message: str, unmatched: Sequence[str] = ()) -> None:
        detail = f"; unmatched: {sorted(unmatched)[:10]}" if unmatched else ""
        super().__init__(message + detail)
        self.unmatched = tuple(unmatched)


@dataclass
class References:
    """Gold data for scoring, aligned by dialogue_id/turn (or example index)."""

    gold_states: Mapping[tuple[str, int], BeliefState] | None = None
    gold_labels: Mapping[int, str] | None = None
    gold_responses: Mapping[tuple[str, int], str] | None = None
    goals: Mapping[str, GoalSpec] | None = None
    domains_by_dialogue: Mapping[str, frozenset[str]] = field(default_factory=dict)


@dataclass
class MetricsReport:
    task: str
    counts: dict[str, int] = field(default_factory=dict)
    jga: float | None = None
    slot_p: float | None = None
    slot_r: float | None = None
    slot_f1: float | None = None
    intent_acc_single: float | None = None
    intent_acc_topk: dict[int, float] = field(default_factory=dict)
    bleu: float | None = None
    inform: float | None = None
    success: float | None = None
    hdd: float | None = None
    mattr: float | None = None
    mtld: float | None = None
    vocd: float | None = None
    per_domain: dict[str, dict[str, float]] = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "task": self.task,
            "counts": dict(self.counts),
            "per_domain": {d: dict(v) for d, v in self.per_domain.items()},
            "config": self.config,
        }
        for name in (
            "jga",
            "slot_p",
            "slot_r",
            "slot_f1",
            "intent_acc_single",
            "bleu",
            "inform",
            "success",
            "hdd",
            "mattr",
            "mtld",
            "vocd",
        ):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.intent_acc_topk:
            out["intent_acc_topk"] = {str(k): v for k, v in self.intent_acc_topk.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def _cells(self) -> list[tuple[str, str]]:
        cells: list[tuple[str, str]] = []

        def fmt(x: float | None) -> str:
            return "-" if x is None else f"{x:.4f}"

        if self.jga is not None:
            cells += [("JGA", fmt(self.jga)), ("Slot-F1", fmt(self.slot_f1))]
        if self.intent_acc_single is not None:
            cells.append(("Acc(single)", fmt(self.intent_acc_single)))
        for k in sorted(self.intent_acc_topk):
            cells.append((f"Acc(top-{k})", fmt(self.intent_acc_topk[k])))
        if self.bleu is not None:
            cells.append(("BLEU", f"{self.bleu:.2f}"))
        if self.inform is not None:
            cells += [("Inform", fmt(self.inform)), ("Success", fmt(self.success))]
        for name in ("hdd", "mattr", "mtld", "vocd"):
            value = getattr(self, name)
            if value is not None:
                cells.append((name.upper(), fmt(value)))
        return cells

    def to_table(self) -> str:
        lines = [f"task: {self.task}   " + "  ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))]
        cells = self._cells()
        if cells:
            header = " | ".join(name for name, _ in cells)
            values = " | ".join(value for _, value in cells)
            rule = "-+-".join("-" * len(name) for name, _ in cells)
            lines += [header, rule, values]
        if self.per_domain:
            lines.append("")
            metrics = sorted({m for v in self.per_domain.values() for m in v})
            lines.append("domain | " + " | ".join(metrics))
            for domain in sorted(self.per_domain):
                row = self.per_domain[domain]
                lines.append(
                    f"{domain} | " + " | ".join(f"{row.get(m, float('nan')):.4f}" for m in metrics)
                )
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["metric,value"]
        for name, value in self._cells():
            lines.append(f"{name},{value}")
        for domain in sorted(self.per_domain):
            for metric in sorted(self.per_domain[domain]):
                lines.append(f"{domain}/{metric},{self.per_domain[domain][metric]:.6f}")
        return "\n".join(lines) + "\n"


def word_tokens(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def _report_dst(records: list[dict], refs: References) -> MetricsReport:
    preds, golds = [], []
    turn_domains: list[frozenset[str]] = []
    unmatched = []
    assert refs.gold_states is not None
    for rec in records:
        key = (rec["dialogue_id"], rec["turn"])
        gold = refs.gold_states.get(key)
        if gold is None:
            unmatched.append(f"{key[0]}:{key[1]}")
            continue
        preds.append(BeliefState.build(rec["state"]))
        golds.append(gold)
        turn_domains.append(refs.domains_by_dialogue.get(rec["dialogue_id"], frozenset()))
    if unmatched:
        raise AlignmentError("dump turns missing from references", unmatched)

    precision, recall, f1 = slot_f1(preds, golds)
    report = MetricsReport(
        task="dst",
        counts={"turns": len(preds)},
        jga=jga(preds, golds),
        slot_p=precision,
        slot_r=recall,
        slot_f1=f1,
    )
    by_domain: dict[str, tuple[list, list]] = {}
    for pred, gold, domains in zip(preds, golds, turn_domains):
        key = next(iter(domains)) if len(domains) == 1 else "multi"
        by_domain.setdefault(key, ([], []))[0].append(pred)
        by_domain[key][1].append(gold)
    for domain, (dp, dg) in sorted(by_domain.items()):
        _, _, df1 = slot_f1(dp, dg)
        report.per_domain[domain] = {"jga": jga(dp, dg), "slot_f1": df1, "turns": len(dp)}
    return report


def _report_ic(records: list[dict], refs: References) -> MetricsReport:
    assert refs.gold_labels is not None
    preds, golds = [], []
    unmatched = []
    for rec in records:
        gold = refs.gold_labels.get(rec["index"])
        if gold is None:
            unmatched.append(str(rec["index"]))
            continue
        preds.append(IntentPrediction(tuple(rec["ranked"])))
        golds.append(gold)
    if unmatched:
        raise AlignmentError("dump examples missing from references", unmatched)

    report = MetricsReport(task="ic", counts={"examples": len(preds)})
    multi = any(len(p.ranked) > 1 for p in preds)
    if multi:
        report.intent_acc_topk = {k: intent_accuracy(preds, golds, k) for k in (1, 2, 3)}
    else:
        report.intent_acc_single = intent_accuracy(preds, golds, 1)
    return report


def _report_e2e(
    records: list[dict],
    refs: References,
    catalog: KbCatalog,
    diversity_window: int = 50,
    mtld_threshold: float = 0.72,
    vocd_seed: int = 42,
) -> MetricsReport:
    from .delex import delexicalize

    assert refs.gold_responses is not None and refs.goals is not None
    hyps, gold_refs = [], []
    by_dialogue: dict[str, list[str]] = {}
    unmatched = []
    for rec in records:
        key = (rec["dialogue_id"], rec["turn"])
        gold = refs.gold_responses.get(key)
        if gold is None:
            unmatched.append(f"{key[0]}:{key[1]}")
            continue
        by_dialogue.setdefault(rec["dialogue_id"], []).append(rec["response"])
        hyps.append(delexicalize(rec["response"], catalog))
        gold_refs.append(delexicalize(gold, catalog))
    if unmatched:
        raise AlignmentError("dump turns missing from references", unmatched)

    dialogues = []
    missing_goals = [d for d in by_dialogue if d not in refs.goals]
    if missing_goals:
        raise AlignmentError("dialogues missing goals", missing_goals)
    for dialogue_id, responses in by_dialogue.items():
        dialogues.append((responses, refs.goals[dialogue_id]))
    completion = inform_success(dialogues, catalog)

    report = MetricsReport(
        task="e2e",
        counts={"turns": len(hyps), "dialogues": len(by_dialogue)},
        bleu=corpus_bleu(hyps, gold_refs),
        inform=completion.inform,
        success=completion.success,
    )
    for domain, (inf, suc) in completion.per_domain.items():
        report.per_domain[domain] = {"inform": inf, "success": suc}

    tokens = [t for hyp in hyps for t in word_tokens(hyp)]
    report.counts["tokens"] = len(tokens)
    try:
        report.hdd = hdd(tokens)
    except TooShort:
        pass
    if tokens:
        report.mattr = mattr(tokens, window=diversity_window)
        report.mtld = mtld(tokens, threshold=mtld_threshold)
    try:
        report.vocd = vocd(tokens, seed=vocd_seed)
    except TooShort:
        pass
    return report


def report(
    records: Sequence[dict],
    refs: References,
    catalog: KbCatalog | None = None,
    **e2e_params,
) -> MetricsReport:
    """Score a prediction dump against references; raises AlignmentError on
    empty dumps or unmatched dialogue ids."""
    records = [r for r in records if "task" in r]
    if not records:
        raise AlignmentError("empty prediction dump")
    tasks = {r["task"] for r in records}
    if len(tasks) != 1:
        raise AlignmentError(f"mixed tasks in one dump: {sorted(tasks)}")
    task = tasks.pop()
    if task == "dst":
        return _report_dst(records, refs)
    if task == "ic":
        return _report_ic(records, refs)
    if task in ("e2e", "e2e-naive"):
        if catalog is None:
            raise AlignmentError("e2e scoring needs the KB catalog")
        return _report_e2e(records, refs, catalog, **e2e_params)
    raise AlignmentError(f"unknown task {task!r}")
