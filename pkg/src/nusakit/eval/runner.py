"""Task execution and scoreboard aggregation.

``run_task`` dispatches the matching evaluator or mapper per record, applies
the task's metric, and reports judge usage; ``aggregate`` averages per-task
values into a one-decimal scoreboard row.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from ..errors import DataError
from ..languages import LanguageTag
from . import heuristics, metrics
from .judge import VERDICT_UNPARSEABLE, JudgeAudit, JudgeClient, JudgeVerdict, judge_call
from .records import TASK_ORDER, TASKS, EvalRecord, TaskSpec


class JudgeSession:
    """Counts judge calls and flags unparseable verdicts with record context."""

    def __init__(self, client: JudgeClient, audit: JudgeAudit | None = None):
        self.client = client
        self.audit = audit
        self.calls = 0
        self.flags: list[tuple[int, str]] = []
        self._record_index = -1

    def begin_record(self, index: int) -> None:
        self._record_index = index

    def ask(self, template_id: str, fields: Mapping[str, str]) -> JudgeVerdict:
        self.calls += 1
        verdict = judge_call(template_id, fields, self.client, self.audit)
        if verdict.verdict == VERDICT_UNPARSEABLE:
            self.flags.append((self._record_index,
                               f"unparseable judge response: {verdict.raw!r}"))
        return verdict


@dataclass(frozen=True)
class TaskScore:
    task: TaskSpec
    value: float  # in [0, 100]
    n: int
    per_record: list
    judge_calls: int
    flagged: list[tuple[int, str]] = field(default_factory=list)


@dataclass(frozen=True)
class Scoreboard:
    model_name: str
    scores: dict[str, float]  # task name -> value
    average: float


_BOOLEAN_EVALUATORS = {
    "indommlu": heuristics.eval_indommlu,
    "id_en": heuristics.eval_id_en,
    "xcopa_id": heuristics.eval_containment,
    "tydiqa_id": heuristics.eval_containment,
    "nusax_senti": heuristics.eval_nusax_senti,
    "id_hatespeech": heuristics.eval_hatespeech,
}


def run_task(spec: TaskSpec, records: Sequence[EvalRecord], judge: JudgeClient,
             *, audit: JudgeAudit | None = None,
             intent_list: Sequence[str] = heuristics.DEFAULT_INTENTS,
             negative_intent: str = heuristics.DEFAULT_NEGATIVE_INTENT,
             exclude_langs: Sequence[LanguageTag] = (),
             id_en_mapper: heuristics.IdEnKeywordMapper | None = None) -> TaskScore:
    """Score one task; per-record errors are flagged, not fatal."""
    if spec.name not in TASKS:
        raise DataError(f"unknown task {spec.name!r}")
    excluded = set(exclude_langs)
    records = [r for r in records if r.lang not in excluded]
    if not records:
        raise DataError(f"task {spec.name}: no records to score")
    if spec.name == "id_en" and id_en_mapper is not None:
        records = [r if r.output_mapped is not None
                   else replace(r, output_mapped=id_en_mapper.map(r.output))
                   for r in records]
    session = JudgeSession(judge, audit)
    per_record: list = []

    if spec.name in _BOOLEAN_EVALUATORS:
        evaluator = _BOOLEAN_EVALUATORS[spec.name]
        for i, rec in enumerate(records):
            session.begin_record(i)
            per_record.append(bool(evaluator(rec, session)))
        value = metrics.accuracy(per_record)
    elif spec.name == "intent":
        golds = [r.answer.strip().lower() for r in records]
        per_record = [heuristics.map_intent(r.output, intent_list, negative_intent)
                      for r in records]
        value = metrics.weighted_f1(per_record, golds)
    elif spec.name == "colloquial":
        per_record = [heuristics.map_colloquial(r.output) for r in records]
        outcomes = [str(mapped) == r.answer.strip()
                    for mapped, r in zip(per_record, records)]
        value = metrics.accuracy(outcomes)
    elif spec.name == "nusax_mt":
        for i, rec in enumerate(records):
            try:
                per_record.append(metrics.chrf_pp(rec.output, rec.answer))
            except DataError as exc:
                session.flags.append((i, str(exc)))
                per_record.append(0.0)
        value = sum(per_record) / len(per_record)
    elif spec.name == "indosum":
        for i, rec in enumerate(records):
            try:
                per_record.append(metrics.rouge_l(rec.output, rec.answer))
            except DataError as exc:
                session.flags.append((i, str(exc)))
                per_record.append((0.0, 0.0, 0.0))
        value = 100.0 * sum(r[2] for r in per_record) / len(per_record)
    else:  # pragma: no cover - registry and dispatch are kept in sync
        raise DataError(f"no evaluator wired for task {spec.name!r}")

    return TaskScore(
        task=spec,
        value=value,
        n=len(records),
        per_record=per_record,
        judge_calls=session.calls,
        flagged=session.flags,
    )


def aggregate(values: Mapping[str, float], model_name: str) -> Scoreboard:
    """Arithmetic mean of the per-task values, rounded to one decimal."""
    if not values:
        raise DataError("cannot aggregate an empty scoreboard")
    average = round(sum(values.values()) / len(values), 1)
    return Scoreboard(model_name=model_name, scores=dict(values), average=average)


def scoreboard_from_tasks(task_scores: Sequence[TaskScore], model_name: str) -> Scoreboard:
    return aggregate({ts.task.name: ts.value for ts in task_scores}, model_name)


def _ordered_tasks(boards: Sequence[Scoreboard]) -> list[str]:
    present = {name for board in boards for name in board.scores}
    return [name for name in TASK_ORDER if name in present]


def scoreboard_csv(boards: Sequence[Scoreboard]) -> str:
    tasks = _ordered_tasks(boards)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["model"] + tasks + ["average"])
    for board in boards:
        row = [board.model_name]
        row += ["" if t not in board.scores else f"{board.scores[t]:.1f}" for t in tasks]
        row.append(f"{board.average:.1f}")
        writer.writerow(row)
    return out.getvalue()


def scoreboard_markdown(boards: Sequence[Scoreboard]) -> str:
    tasks = _ordered_tasks(boards)
    header = ["Model"] + tasks + ["Average"]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    for board in boards:
        cells = [board.model_name]
        cells += ["" if t not in board.scores else f"{board.scores[t]:.1f}" for t in tasks]
        cells.append(f"{board.average:.1f}")
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
