"""Run configuration: built-in defaults < config file < command-line flags."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import yaml


class ConfigError(Exception):
    pass


DEFAULTS = {
    "table": None,              # None -> packaged default table
    "provider": None,           # "mock:PATH" or an http(s) URL
    "detector": "oracle",       # "oracle" or an http(s) URL
    "strategy": "mask-all-replace-all",
    "alpha": 0.0,
    "top_k": 20,
    "threshold": 0.5,
    "jobs": 1,
    "trace": False,
    "strict": False,
    "output": None,
}


@dataclass
class RunConfig:
    table: str | None
    provider: str | None
    detector: str
    strategy: str
    alpha: float
    top_k: int
    threshold: float
    jobs: int
    trace: bool
    strict: bool
    output: str | None


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text("utf-8")
    try:
        if path.suffix == ".json":
            data = json.loads(text)
        else:
            data = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    return data


def build_config(config_file: str | None, overrides: dict) -> RunConfig:
    """Merge defaults, optional config file and non-None CLI overrides."""
    merged = dict(DEFAULTS)
    if config_file:
        merged.update(load_config_file(config_file))
    merged.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig(**merged)
    if cfg.alpha < 0:
        raise ConfigError("alpha must be >= 0")
    if cfg.top_k < 1:
        raise ConfigError("top-k must be >= 1")
    if not 0.0 <= cfg.threshold <= 1.0:
        raise ConfigError("threshold must be in [0, 1]")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return cfg
