"""Operator entry point: run benchmarks, score dumps, chat, record/replay, serve.

Exit codes: 0 success, 2 config error, 3 dataset error, 4 alignment error,
5 port in use. Prediction dumps are JSON Lines with a config-echo header
object as the first line; lines are flushed as they are produced so an
interrupted run leaves a valid partial dump.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .config import ConfigError, RunConfig, build_backend, load_config
from .data.intents import IntentDatasetKind, Split, load_intent_dataset
from .data.multiwoz import (
    AnnotatedDialogue,
    DataError,
    filter_single_domain,
    load_multiwoz,
    mini_corpus_dir,
)
from .data.slots import mwoz_slot_catalog
from .dialogue import DialogueContext, Speaker
from .gateway import GatewayError, record_transcript
from .kb.catalog import KbError
from .metrics.report import AlignmentError, References, report
from .pipeline.drivers import (
    run_dst_dataset,
    run_e2e_dataset,
    run_ic_dataset,
    run_naive_dataset,
    run_rg_dataset,
)
from .pipeline.turn import TurnAborted, run_turn
from .prompts.builders import DstSetting, IcMode

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_ALIGNMENT = 4
EXIT_PORT = 5
EXIT_INTERRUPT = 130

TASKS = ("ic", "dst", "rg", "e2e", "e2e-naive")


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_run_config(config_path: str | None, replay: str | None, workers: int | None) -> RunConfig:
    overrides: dict = {}
    if replay:
        overrides["backend"] = {"kind": "replay", "transcript": replay}
    cfg = load_config(config_path, overrides)
    if workers is not None:
        cfg.workers = workers
    return cfg


def _dataset_dir(cfg: RunConfig) -> Path:
    return Path(cfg.data.dataset_dir) if cfg.data.dataset_dir else mini_corpus_dir()


def _intent_dir(cfg: RunConfig) -> Path:
    return Path(cfg.data.intent_dir) if cfg.data.intent_dir else mini_corpus_dir() / "intents"


def _select_dialogues(
    dialogues: list[AnnotatedDialogue], domain: str, limit: int
) -> list[AnnotatedDialogue]:
    if domain:
        dialogues = filter_single_domain(dialogues, domain)
    if limit:
        dialogues = dialogues[:limit]
    return dialogues


@click.group()
def main() -> None:
    """Zero-shot task-oriented dialogue runner and evaluator."""


@main.command("run")
@click.argument("task", type=click.Choice(TASKS))
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML run config.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Prediction dump (JSONL).")
@click.option("--record-transcript", "record_path", type=click.Path(), default=None)
@click.option("--replay", "replay_path", type=click.Path(), default=None, help="Replay transcript.")
@click.option("--workers", type=int, default=None)
@click.option("--domain", default="", help="Single-domain filter (dst/e2e).")
@click.option(
    "--setting",
    type=click.Choice([s.value for s in DstSetting]),
    default=DstSetting.ALL_SLOTS.value,
)
@click.option("--mode", type=click.Choice([m.value for m in IcMode]), default=IcMode.SINGLE.value)
@click.option("--limit", type=int, default=0, help="Cap on dialogues/examples (0 = all).")
def cmd_run(task, config_path, out_path, record_path, replay_path, workers, domain, setting, mode, limit):
    """Run a benchmark task and write a JSONL prediction dump."""
    try:
        cfg = _load_run_config(config_path, replay_path, workers)
        backend = build_backend(cfg.backend)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))

    transcript = None
    if record_path:
        backend, transcript = record_transcript(backend)

    try:
        if task == "ic":
            utterances, labels, _ = load_intent_dataset(
                IntentDatasetKind(cfg.data.intent_kind), _intent_dir(cfg)
            )
            test_texts = [u.text for u in utterances if u.split is Split.TEST]
            if limit:
                test_texts = test_texts[:limit]
            payload = ("ic", test_texts, labels)
        else:
            dialogues, catalog = load_multiwoz(_dataset_dir(cfg))
            dialogues = _select_dialogues(dialogues, domain, limit)
            payload = (task, dialogues, catalog)
    except (DataError, KbError) as exc:
        _fail(EXIT_DATA, str(exc))

    interrupted = False
    with open(out_path, "w", encoding="utf-8") as fh:

        def sink(record: dict) -> None:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            fh.flush()

        sink({"config": cfg.as_dict(), "task": task})
        try:
            if task == "ic":
                _, test_texts, labels = payload
                run_ic_dataset(backend, test_texts, labels, IcMode(mode), sink=sink)
            elif task == "dst":
                _, dialogues, _ = payload
                run_dst_dataset(
                    backend, dialogues, mwoz_slot_catalog(), DstSetting(setting), domain, sink=sink
                )
            elif task == "rg":
                _, dialogues, _ = payload
                run_rg_dataset(backend, dialogues, sink=sink)
            elif task == "e2e":
                _, dialogues, catalog = payload
                run_e2e_dataset(backend, dialogues, catalog, cfg.pipeline, cfg.workers, sink=sink)
            else:
                _, dialogues, catalog = payload
                run_naive_dataset(backend, dialogues, catalog, cfg.pipeline, sink=sink)
        except KeyboardInterrupt:
            interrupted = True
        except (GatewayError, TurnAborted) as exc:
            _fail(EXIT_DATA, f"backend failure: {exc}")

    if transcript is not None:
        transcript.dump(record_path)
        click.echo(f"transcript written to {record_path}")
    click.echo(f"{'partial ' if interrupted else ''}dump written to {out_path}")
    sys.exit(EXIT_INTERRUPT if interrupted else EXIT_OK)


def _build_references(task: str, cfg: RunConfig) -> tuple[References, object]:
    if task == "ic":
        utterances, _, _ = load_intent_dataset(
            IntentDatasetKind(cfg.data.intent_kind), _intent_dir(cfg)
        )
        test_rows = [u for u in utterances if u.split is Split.TEST]
        return References(gold_labels={i: u.gold_label for i, u in enumerate(test_rows)}), None

    dialogues, catalog = load_multiwoz(_dataset_dir(cfg))
    gold_states = {}
    gold_responses = {}
    goals = {}
    domains = {}
    for dialogue in dialogues:
        goals[dialogue.dialogue_id] = dialogue.goal
        domains[dialogue.dialogue_id] = dialogue.domains
        for turn_no, state in enumerate(dialogue.gold_states):
            gold_states[(dialogue.dialogue_id, turn_no)] = state
        for turn_no, response in enumerate(dialogue.gold_responses):
            gold_responses[(dialogue.dialogue_id, turn_no)] = response
    refs = References(
        gold_states=gold_states,
        gold_responses=gold_responses,
        goals=goals,
        domains_by_dialogue=domains,
    )
    return refs, catalog


@main.command("eval")
@click.option("--dump", "dump_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None, help="Report JSON path.")
@click.option("--format", "fmt", type=click.Choice(["json", "table", "csv"]), default="table")
def cmd_eval(dump_path, config_path, out_path, fmt):
    """Score a prediction dump and emit the metrics report."""
    try:
        cfg = load_config(config_path) if config_path else RunConfig()
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))

    try:
        records = []
        header: dict = {}
        with open(dump_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                if "config" in obj and "task" in obj and "dialogue_id" not in obj and "index" not in obj:
                    header = obj
                    continue
                records.append(obj)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_DATA, f"cannot read dump: {exc}")

    task = header.get("task") or (records[0]["task"] if records else "")
    try:
        refs, catalog = _build_references(task, cfg)
    except (DataError, KbError) as exc:
        _fail(EXIT_DATA, str(exc))

    try:
        result = report(
            records,
            refs,
            catalog,
            **(
                {
                    "diversity_window": cfg.eval.diversity_window,
                    "mtld_threshold": cfg.eval.mtld_threshold,
                    "vocd_seed": cfg.eval.vocd_seed,
                }
                if task in ("e2e", "e2e-naive")
                else {}
            ),
        )
    except AlignmentError as exc:
        _fail(EXIT_ALIGNMENT, str(exc))

    result.config = header.get("config", cfg.as_dict())
    if fmt == "json":
        click.echo(result.to_json())
    elif fmt == "csv":
        click.echo(result.to_csv(), nl=False)
    else:
        click.echo(result.to_table())
    if out_path:
        Path(out_path).write_text(result.to_json() + "\n", encoding="utf-8")
    sys.exit(EXIT_OK)


@main.command("chat")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--replay", "replay_path", type=click.Path(), default=None)
@click.option("--record-transcript", "record_path", type=click.Path(), default=None)
def cmd_chat(config_path, replay_path, record_path):
    """Interactive REPL over the full pipeline (/trace, /reset, /quit)."""
    try:
        cfg = _load_run_config(config_path, replay_path, None)
        backend = build_backend(cfg.backend)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        _, catalog = load_multiwoz(_dataset_dir(cfg))
    except (DataError, KbError) as exc:
        _fail(EXIT_DATA, str(exc))

    transcript = None
    if record_path:
        backend, transcript = record_transcript(backend)

    click.echo("chat ready (/trace, /reset, /quit)")
    context = DialogueContext((), "chat")
    last_trace = None
    while True:
        try:
            line = input()
        except EOFError:
            break
        line = line.strip()
        if not line:
            continue
        if line == "/quit":
            break
        if line == "/reset":
            context = DialogueContext((), "chat")
            last_trace = None
            click.echo("context cleared")
            continue
        if line == "/trace":
            if last_trace is None:
                click.echo("no trace yet")
            else:
                click.echo(f"PROXY BELIEF STATE: {last_trace.proxy_bs.text}")
                click.echo(json.dumps(last_trace.to_json_dict(), indent=2, sort_keys=True))
            continue
        context = context.with_turn(Speaker.USER, line)
        try:
            trace = run_turn(backend, context, catalog, cfg.pipeline)
        except (TurnAborted, GatewayError) as exc:
            click.echo(f"[backend error: {exc}]")
            context = DialogueContext(context.turns[:-1], context.dialogue_id)
            continue
        last_trace = trace
        context = context.with_turn(Speaker.SYSTEM, trace.response)
        click.echo(f"SYSTEM: {trace.response}")

    if transcript is not None and record_path:
        transcript.dump(record_path)
    sys.exit(EXIT_OK)


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--replay", "replay_path", type=click.Path(), default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8080)
@click.option("--journal", "journal_path", type=click.Path(), default=None)
@click.option("--ui-dir", "ui_dir", type=click.Path(), default=None)
def cmd_serve(config_path, replay_path, host, port, journal_path, ui_dir):
    """Launch the HTTP chat service (see service module for the API)."""
    import uvicorn

    from .service import create_app

    try:
        cfg = _load_run_config(config_path, replay_path, None)
        backend = build_backend(cfg.backend)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        _, catalog = load_multiwoz(_dataset_dir(cfg))
    except (DataError, KbError) as exc:
        _fail(EXIT_DATA, str(exc))

    try:
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((host, port))
    except OSError as exc:
        _fail(EXIT_PORT, f"cannot bind {host}:{port}: {exc}")
    actual_port = sock.getsockname()[1]
    click.echo(f"listening on http://{host}:{actual_port}")

    app = create_app(
        backend,
        catalog,
        cfg.pipeline,
        journal_path=journal_path,
        ui_dir=ui_dir,
        config_snapshot=cfg.as_dict(),
    )
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
