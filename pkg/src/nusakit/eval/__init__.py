"""Multi-task evaluation harness: heuristics, judge fallback, metrics, scoreboard."""

from .heuristics import (
    DEFAULT_INTENTS,
    DEFAULT_NEGATIVE_INTENT,
    QA_REFUSAL,
    IdEnKeywordMapper,
    eval_containment,
    eval_hatespeech,
    eval_id_en,
    eval_indommlu,
    eval_nusax_senti,
    map_colloquial,
    map_intent,
)
from .judge import (
    FixtureJudgeClient,
    HttpJudgeClient,
    JudgeAudit,
    JudgeVerdict,
    judge_call,
    parse_verdict,
    render_prompt,
)
from .metrics import accuracy, chrf_pp, perplexity, rouge_l, weighted_f1
from .records import TASK_ORDER, TASKS, EvalRecord, TaskSpec, load_records
from .runner import (
    JudgeSession,
    Scoreboard,
    TaskScore,
    aggregate,
    run_task,
    scoreboard_csv,
    scoreboard_from_tasks,
    scoreboard_markdown,
)

__all__ = [
    "DEFAULT_INTENTS",
    "DEFAULT_NEGATIVE_INTENT",
    "QA_REFUSAL",
    "TASKS",
    "TASK_ORDER",
    "EvalRecord",
    "TaskSpec",
    "FixtureJudgeClient",
    "HttpJudgeClient",
    "IdEnKeywordMapper",
    "JudgeAudit",
    "JudgeSession",
    "JudgeVerdict",
    "Scoreboard",
    "TaskScore",
    "accuracy",
    "aggregate",
    "chrf_pp",
    "eval_containment",
    "eval_hatespeech",
    "eval_id_en",
    "eval_indommlu",
    "eval_nusax_senti",
    "judge_call",
    "load_records",
    "map_colloquial",
    "map_intent",
    "parse_verdict",
    "perplexity",
    "render_prompt",
    "rouge_l",
    "run_task",
    "scoreboard_csv",
    "scoreboard_from_tasks",
    "scoreboard_markdown",
    "weighted_f1",
]
