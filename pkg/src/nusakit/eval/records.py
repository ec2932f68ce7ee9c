"""Evaluation records and the ten-task registry."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import DataError
from ..languages import (
    ENGLISH,
    INDONESIAN,
    JAVANESE,
    REGIONAL_LANGUAGES,
    SUNDANESE,
    LanguageTag,
)

DISCRIMINATIVE = "discriminative"
GENERATIVE = "generative"

METRIC_ACCURACY = "accuracy"
METRIC_F1_WEIGHTED = "f1_weighted"
METRIC_CHRF_PP = "chrf_pp"
METRIC_ROUGE_L_F1 = "rouge_l_f1"

# NusaX covers Indonesian plus ten regional languages (no Lampungnese).
_NUSAX_LANGS = tuple(t for t in REGIONAL_LANGUAGES if t.code != "lampungnese")


@dataclass(frozen=True)
class TaskSpec:
    name: str
    kind: str
    metric: str
    languages: tuple[LanguageTag, ...]


TASKS: dict[str, TaskSpec] = {
    spec.name: spec
    for spec in (
        TaskSpec("indommlu", DISCRIMINATIVE, METRIC_ACCURACY, (INDONESIAN,)),
        TaskSpec("id_en", DISCRIMINATIVE, METRIC_ACCURACY, (INDONESIAN, ENGLISH)),
        TaskSpec("xcopa_id", DISCRIMINATIVE, METRIC_ACCURACY, (INDONESIAN,)),
        TaskSpec("intent", DISCRIMINATIVE, METRIC_F1_WEIGHTED,
                 (INDONESIAN, JAVANESE, SUNDANESE)),
        TaskSpec("colloquial", DISCRIMINATIVE, METRIC_ACCURACY, (INDONESIAN,)),
        TaskSpec("nusax_senti", DISCRIMINATIVE, METRIC_ACCURACY,
                 (INDONESIAN,) + _NUSAX_LANGS),
        TaskSpec("id_hatespeech", DISCRIMINATIVE, METRIC_ACCURACY, (INDONESIAN,)),
        TaskSpec("nusax_mt", GENERATIVE, METRIC_CHRF_PP,
                 (INDONESIAN, ENGLISH) + _NUSAX_LANGS),
        TaskSpec("tydiqa_id", GENERATIVE, METRIC_ACCURACY, (INDONESIAN,)),
        TaskSpec("indosum", GENERATIVE, METRIC_ROUGE_L_F1, (INDONESIAN,)),
    )
}

TASK_ORDER: tuple[str, ...] = tuple(TASKS)


@dataclass(frozen=True)
class EvalRecord:
    """One model answer under one task."""

    input: str
    output: str
    answer: str
    output_mapped: str | None = None
    options: str | None = None
    lang: LanguageTag = INDONESIAN

    def __post_init__(self) -> None:
        if not self.answer:
            raise DataError("record answer must be nonempty")


def load_records(path: str | Path) -> list[EvalRecord]:
    """Read task records from jsonl with the Input/Output/answer column names."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"task file not found: {path}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(row, dict):
                raise DataError(f"line {line_no}: record is not an object")
            if "answer" not in row or str(row["answer"]) == "":
                raise DataError(f"line {line_no}: missing or empty answer")
            records.append(EvalRecord(
                input=str(row.get("Input", "")),
                output=str(row.get("Output", "")),
                answer=str(row["answer"]),
                output_mapped=(None if row.get("Output_Mapped") is None
                               else str(row["Output_Mapped"])),
                options=None if row.get("Options") is None else str(row["Options"]),
                lang=LanguageTag.parse(str(row.get("lang", "indonesian"))),
            ))
    return records
