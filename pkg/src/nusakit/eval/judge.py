"""Yes/no judge client: prompt templates, verdict parsing, audit logging.

Heuristic evaluators fall back to an external judge only when they cannot
decide. The offline stub answers from a fixture map keyed by the template's
field values; the HTTP client speaks a chat-completion-style protocol.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol

import requests

from ..errors import ConfigError, JudgeError

ENV_JUDGE_ENDPOINT = "NUSAKIT_JUDGE_ENDPOINT"
ENV_JUDGE_MODEL = "NUSAKIT_JUDGE_MODEL"
ENV_JUDGE_API_KEY = "NUSAKIT_JUDGE_API_KEY"

TEMPLATE_MCQ = "mcq_correctness"
TEMPLATE_CONTAINMENT = "containment"
TEMPLATE_EQUALITY = "equality"

PROMPT_TEMPLATES: dict[str, str] = {
    TEMPLATE_MCQ: (
        "Given the following options:{options}."
        "The model's generated response is:{output_text}."
        "The correct answer is: {answer}."
        "Your task is to check if the model's response is correct or not? "
        "Provide a response with Yes or No only."
    ),
    TEMPLATE_CONTAINMENT: (
        "Your task is to check if the Actual Answer is present in the Generated Answer."
        "Generated Answer:{generated_answer},Actual Answer:{actual_answer}."
        "Provide a response with Yes or No only."
    ),
    TEMPLATE_EQUALITY: (
        "Your task is to Verify if the given output is same as expected answer. "
        "Output: {output_text}, Expected Answer: {expected_answer}."
        "Provide a response with Yes or No only."
    ),
}

TEMPLATE_FIELDS: dict[str, tuple[str, ...]] = {
    TEMPLATE_MCQ: ("options", "output_text", "answer"),
    TEMPLATE_CONTAINMENT: ("generated_answer", "actual_answer"),
    TEMPLATE_EQUALITY: ("output_text", "expected_answer"),
}

VERDICT_YES = "yes"
VERDICT_NO = "no"
VERDICT_UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class JudgeVerdict:
    verdict: str
    raw: str
    prompt_id: str

    @property
    def is_yes(self) -> bool:
        return self.verdict == VERDICT_YES


def parse_verdict(raw: str) -> str:
    """Prefix-based, case-insensitive: responses must begin with yes or no."""
    lowered = raw.strip().lower()
    if lowered.startswith("yes"):
        return VERDICT_YES
    if lowered.startswith("no"):
        return VERDICT_NO
    return VERDICT_UNPARSEABLE


def render_prompt(template_id: str, fields: Mapping[str, str]) -> str:
    if template_id not in PROMPT_TEMPLATES:
        raise ConfigError(f"unknown judge template {template_id!r}")
    missing = [name for name in TEMPLATE_FIELDS[template_id] if name not in fields]
    if missing:
        raise ConfigError(f"template {template_id} missing fields: {missing}")
    return PROMPT_TEMPLATES[template_id].format(**fields)


class JudgeClient(Protocol):
    def complete(self, prompt: str, *, template_id: str,
                 fields: Mapping[str, str]) -> str: ...


class FixtureJudgeClient:
    """Scripted verdicts keyed by (template_id, ordered field values)."""

    def __init__(self, fixtures: Mapping[tuple, str] | None = None, default: str = "No"):
        self.fixtures = dict(fixtures or {})
        self.default = default

    @staticmethod
    def fixture_key(template_id: str, fields: Mapping[str, str]) -> tuple:
        return (template_id,) + tuple(fields[name] for name in TEMPLATE_FIELDS[template_id])

    def complete(self, prompt: str, *, template_id: str,
                 fields: Mapping[str, str]) -> str:
        return self.fixtures.get(self.fixture_key(template_id, fields), self.default)


class HttpJudgeClient:
    """Chat-completion-style judge endpoint with retries and per-template pacing."""

    def __init__(self, *, max_concurrency: int = 4, retries: int = 3,
                 timeout: float = 60.0, min_interval: float = 0.0):
        self.endpoint = os.environ.get(ENV_JUDGE_ENDPOINT, "")
        self.model = os.environ.get(ENV_JUDGE_MODEL, "")
        self.api_key = os.environ.get(ENV_JUDGE_API_KEY, "")
        if not self.endpoint or not self.model or not self.api_key:
            raise ConfigError(
                f"judge credentials missing: set {ENV_JUDGE_ENDPOINT}, "
                f"{ENV_JUDGE_MODEL} and {ENV_JUDGE_API_KEY}")
        self.retries = retries
        self.timeout = timeout
        self.min_interval = min_interval
        self._semaphore = threading.Semaphore(max_concurrency)
        self._last_call: dict[str, float] = {}
        self._lock = threading.Lock()

    def _pace(self, template_id: str) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            ready = self._last_call.get(template_id, 0.0) + self.min_interval
            self._last_call[template_id] = max(now, ready)
            wait = ready - now
        if wait > 0:
            time.sleep(wait)

    def complete(self, prompt: str, *, template_id: str,
                 fields: Mapping[str, str]) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        with self._semaphore:
            self._pace(template_id)
            for attempt in range(self.retries):
                try:
                    response = requests.post(self.endpoint, json=payload,
                                             headers=headers, timeout=self.timeout)
                    response.raise_for_status()
                    return response.json()["choices"][0]["message"]["content"]
                except (requests.RequestException, KeyError, ValueError, IndexError) as exc:
                    last_error = exc
                    time.sleep(0.5 * 2 ** attempt)
        raise JudgeError(f"judge call failed after {self.retries} attempts: {last_error}")


class JudgeAudit:
    """Append-only jsonl log of every judge call; content is run-deterministic."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.entries: list[dict] = []
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def record(self, entry: dict) -> None:
        entry = {"call": len(self.entries), **entry}
        self.entries.append(entry)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")


def judge_call(template_id: str, fields: Mapping[str, str], client: JudgeClient,
               audit: JudgeAudit | None = None) -> JudgeVerdict:
    """Render the template, query the judge, parse and log the verdict."""
    fields = {k: str(v) for k, v in fields.items()}
    prompt = render_prompt(template_id, fields)
    raw = client.complete(prompt, template_id=template_id, fields=fields)
    verdict = JudgeVerdict(verdict=parse_verdict(raw), raw=raw, prompt_id=template_id)
    if audit is not None:
        audit.record({
            "prompt_id": template_id,
            "prompt": prompt,
            "raw_response": raw,
            "verdict": verdict.verdict,
        })
    return verdict
