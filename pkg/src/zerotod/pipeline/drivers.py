"""Dataset-level evaluation drivers producing JSON-able prediction records."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from ..data.multiwoz import AnnotatedDialogue
from ..dialogue import DialogueContext, Speaker
from ..gateway.base import Backend
from ..kb.catalog import KbCatalog
from ..prompts.builders import DstSetting, IcMode, SlotCatalog
from .modular import run_dst, run_ic, run_rg
from .turn import PipelineConfig, respond_naive, run_turn

RecordSink = Callable[[dict], None]


def _emit(records: list[dict], sink: RecordSink | None, record: dict) -> None:
    records.append(record)
    if sink is not None:
        sink(record)


def run_e2e_dialogue(
    backend: Backend,
    dialogue: AnnotatedDialogue,
    catalog: KbCatalog,
    cfg: PipelineConfig,
) -> list[dict]:
    """Run the full turn loop over one dialogue: gold user turns, generated
    system turns feed back into the context."""
    context = DialogueContext((), dialogue.dialogue_id)
    records = []
    user_turns = [t for t in dialogue.turns.turns if t.speaker is Speaker.USER]
    for turn_no, user_turn in enumerate(user_turns):
        context = context.with_turn(Speaker.USER, user_turn.text)
        trace = run_turn(backend, context, catalog, cfg)
        context = context.with_turn(Speaker.SYSTEM, trace.response)
        records.append(
            {
                "task": "e2e",
                "dialogue_id": dialogue.dialogue_id,
                "turn": turn_no,
                "response": trace.response,
                "trace": trace.to_json_dict(),
            }
        )
    return records


def run_e2e_dataset(
    backend: Backend,
    dialogues: Sequence[AnnotatedDialogue],
    catalog: KbCatalog,
    cfg: PipelineConfig,
    workers: int = 1,
    sink: RecordSink | None = None,
) -> list[dict]:
    records: list[dict] = []
    if workers <= 1:
        for dialogue in dialogues:
            for record in run_e2e_dialogue(backend, dialogue, catalog, cfg):
                _emit(records, sink, record)
        return records
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_e2e_dialogue, backend, dialogue, catalog, cfg)
            for dialogue in dialogues
        ]
        for future in futures:
            for record in future.result():
                _emit(records, sink, record)
    return records


def run_naive_dataset(
    backend: Backend,
    dialogues: Sequence[AnnotatedDialogue],
    catalog: KbCatalog,
    cfg: PipelineConfig,
    sink: RecordSink | None = None,
) -> list[dict]:
    records: list[dict] = []
    for dialogue in dialogues:
        context = DialogueContext((), dialogue.dialogue_id)
        user_turns = [t for t in dialogue.turns.turns if t.speaker is Speaker.USER]
        for turn_no, user_turn in enumerate(user_turns):
            context = context.with_turn(Speaker.USER, user_turn.text)
            response = respond_naive(backend, catalog, context, cfg)
            context = context.with_turn(Speaker.SYSTEM, response)
            _emit(
                records,
                sink,
                {
                    "task": "e2e-naive",
                    "dialogue_id": dialogue.dialogue_id,
                    "turn": turn_no,
                    "response": response,
                },
            )
    return records


def run_dst_dataset(
    backend: Backend,
    dialogues: Sequence[AnnotatedDialogue],
    slot_catalog: SlotCatalog,
    setting: DstSetting = DstSetting.ALL_SLOTS,
    active_domain: str = "",
    sink: RecordSink | None = None,
) -> list[dict]:
    """Per-user-turn state prediction over cumulative gold context."""
    records: list[dict] = []
    for dialogue in dialogues:
        domain = active_domain
        if setting is DstSetting.DOMAIN_SLOTS and not domain:
            if len(dialogue.domains) == 1:
                domain = next(iter(dialogue.domains))
            else:
                raise ValueError(
                    f"{dialogue.dialogue_id}: active domain required for multi-domain dialogue"
                )
        context = DialogueContext((), dialogue.dialogue_id)
        turn_no = 0
        for turn in dialogue.turns.turns:
            context = context.with_turn(turn.speaker, turn.text)
            if turn.speaker is not Speaker.USER:
                continue
            parsed = run_dst(backend, context, slot_catalog, setting, domain)
            _emit(
                records,
                sink,
                {
                    "task": "dst",
                    "dialogue_id": dialogue.dialogue_id,
                    "turn": turn_no,
                    "state": parsed.state.as_dict(),
                    "out_of_catalog": list(parsed.out_of_catalog),
                    "parse_warning": parsed.warning,
                },
            )
            turn_no += 1
    return records


def run_ic_dataset(
    backend: Backend,
    utterances: Sequence[str],
    labels: Sequence[str],
    mode: IcMode = IcMode.SINGLE,
    sink: RecordSink | None = None,
) -> list[dict]:
    records: list[dict] = []
    for index, utterance in enumerate(utterances):
        prediction = run_ic(backend, utterance, labels, mode)
        _emit(
            records,
            sink,
            {"task": "ic", "index": index, "utterance": utterance, "ranked": list(prediction.ranked)},
        )
    return records


def run_rg_dataset(
    backend: Backend,
    dialogues: Sequence[AnnotatedDialogue],
    sink: RecordSink | None = None,
) -> list[dict]:
    """Oracle-act response generation per system turn, over gold context."""
    records: list[dict] = []
    for dialogue in dialogues:
        context = DialogueContext((), dialogue.dialogue_id)
        turn_no = 0
        for turn in dialogue.turns.turns:
            if turn.speaker is Speaker.USER:
                context = context.with_turn(turn.speaker, turn.text)
                continue
            acts = dialogue.gold_acts[turn_no]
            if acts:
                response = run_rg(backend, context, acts)
                _emit(
                    records,
                    sink,
                    {
                        "task": "rg",
                        "dialogue_id": dialogue.dialogue_id,
                        "turn": turn_no,
                        "response": response,
                    },
                )
            context = context.with_turn(turn.speaker, turn.text)
            turn_no += 1
    return records
