"""Declarative pipeline configuration.

One JSON file drives every CLI command. Relative paths are resolved against
the config file's directory, values can be overridden from the command line,
and each run writes a resolved snapshot next to its outputs so parameter
choices stay auditable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .preprocess import FilterConfig, filter_config_from_dict

DEFAULTS: dict[str, Any] = {
    "seed": 1234,
    "output_dir": "out",
    "corpus": {"input": "", "format": "jsonl"},
    "filter": {},
    "tokenizer": {"base_model": "", "indonesian_top_n": 2000, "regional_top_n": 1000},
    "embedding": {"matrix": "", "extend_count": 0, "selection": [], "labels": [],
                  "compare_matrix": ""},
    "parallel": {"languages": [], "start_policy": "fixed", "client": "stub", "cache": ""},
    "eval": {"model_name": "model", "tasks": [], "judge": "stub", "judge_fixtures": "",
             "exclude_langs": []},
}


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class PipelineConfig:
    def __init__(self, data: dict, base_dir: Path):
        self.data = _merge(DEFAULTS, data)
        self.base_dir = base_dir

    @classmethod
    def load(cls, path: str | Path, overrides: dict | None = None) -> "PipelineConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        config = cls(data, path.parent.resolve())
        for dotted, value in (overrides or {}).items():
            config.set_override(dotted, value)
        return config

    def set_override(self, dotted: str, value: str) -> None:
        """Apply a ``section.key=value`` override; JSON values are parsed when possible."""
        keys = dotted.split(".")
        target = self.data
        for key in keys[:-1]:
            if not isinstance(target.get(key), dict):
                target[key] = {}
            target = target[key]
        try:
            target[keys[-1]] = json.loads(value)
        except json.JSONDecodeError:
            target[keys[-1]] = value

    @property
    def seed(self) -> int:
        return int(self.data["seed"])

    def path(self, dotted: str, *, required: bool = True) -> Path | None:
        keys = dotted.split(".")
        value: Any = self.data
        for key in keys:
            value = value.get(key) if isinstance(value, dict) else None
        if not value:
            if required:
                raise ConfigError(f"config value {dotted!r} is required")
            return None
        resolved = Path(value)
        if not resolved.is_absolute():
            resolved = self.base_dir / resolved
        if required and not resolved.exists():
            raise ConfigError(f"{dotted}: path does not exist: {resolved}")
        return resolved

    def output_dir(self) -> Path:
        raw = Path(str(self.data["output_dir"]))
        return raw if raw.is_absolute() else self.base_dir / raw

    def filter_config(self) -> FilterConfig:
        return filter_config_from_dict(self.data.get("filter") or {})

    def write_snapshot(self, out_dir: Path, command: str) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        snapshot = {"command": command, "config": self.data}
        path = out_dir / f"resolved_config_{command}.json"
        path.write_text(json.dumps(snapshot, indent=2, sort_keys=True, ensure_ascii=False)
                        + "\n", encoding="utf-8")
