"""Run configuration: TOML file -> typed config -> backend construction."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .gateway import (
    Backend,
    FileCacheStore,
    LiveBackend,
    MatchMode,
    ReplayBackend,
    ReplayTranscript,
    wrap_cache,
)
from .pipeline.turn import PipelineConfig


class ConfigError(Exception):
    pass


@dataclass
class BackendConfig:
    kind: str = "replay"
    url: str = ""
    model: str = ""
    key_env: str = "OPENAI_API_KEY"
    temperature: float = 0.0
    max_tokens: int = 256
    window_chars: int | None = 48000
    transcript: str = ""
    cache_path: str = ""
    max_retries: int = 4
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if self.kind not in ("live", "replay", "cached"):
            raise ConfigError(f"backend.kind must be live|replay|cached, got {self.kind!r}")


@dataclass
class DataConfig:
    dataset_dir: str = ""
    intent_dir: str = ""
    intent_kind: str = "banking77"


@dataclass
class EvalConfig:
    diversity_window: int = 50
    mtld_threshold: float = 0.72
    vocd_seed: int = 42


@dataclass
class RunConfig:
    backend: BackendConfig = field(default_factory=BackendConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    data: DataConfig = field(default_factory=DataConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def as_dict(self) -> dict:
        out = asdict(self)
        out["pipeline"]["drop_attributes"] = sorted(self.pipeline.drop_attributes)
        return out


def _build_section(cls, raw: dict, section: str):
    known = {f for f in cls.__dataclass_fields__}  # type: ignore[attr-defined]
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
    try:
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [{section}] section: {exc}") from exc


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Load a TOML run config; `overrides` merges {section: {key: value}} on top."""
    raw: dict = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    for section, values in (overrides or {}).items():
        raw.setdefault(section, {}).update(values)

    pipeline_raw = dict(raw.get("pipeline", {}))
    if "drop_attributes" in pipeline_raw:
        pipeline_raw["drop_attributes"] = frozenset(pipeline_raw["drop_attributes"])
    return RunConfig(
        backend=_build_section(BackendConfig, raw.get("backend", {}), "backend"),
        pipeline=_build_section(PipelineConfig, pipeline_raw, "pipeline"),
        data=_build_section(DataConfig, raw.get("data", {}), "data"),
        eval=_build_section(EvalConfig, raw.get("eval", {}), "eval"),
        workers=int(raw.get("workers", 1)),
    )


def build_backend(cfg: BackendConfig) -> Backend:
    if cfg.kind == "replay":
        if not cfg.transcript:
            raise ConfigError("backend.transcript is required for the replay backend")
        transcript_path = Path(cfg.transcript)
        if not transcript_path.exists():
            raise ConfigError(f"backend.transcript not found: {transcript_path}")
        transcript = ReplayTranscript.load(transcript_path, match_mode=MatchMode.TAG_SEQUENCE)
        return ReplayBackend(transcript)
    if not cfg.url:
        raise ConfigError("backend.url is required for live/cached backends")
    if cfg.kind == "cached" and not cfg.cache_path:
        raise ConfigError("backend.cache_path is required for the cached backend")
    live = LiveBackend(
        base_url=cfg.url,
        model=cfg.model,
        key_env=cfg.key_env,
        timeout_s=cfg.timeout_s,
        max_retries=cfg.max_retries,
        window_chars=cfg.window_chars,
    )
    if cfg.kind == "cached":
        return wrap_cache(live, FileCacheStore(cfg.cache_path))
    return live
