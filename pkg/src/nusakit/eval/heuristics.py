"""Per-task heuristic evaluators and label mappers.

Each evaluator decides a record from the raw model output when the shape is
unambiguous and defers to the judge otherwise. Mappers (intent, colloquial)
turn free-form output into labels for downstream metric computation and never
need the judge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .judge import TEMPLATE_CONTAINMENT, TEMPLATE_EQUALITY, TEMPLATE_MCQ
from .records import EvalRecord

QA_REFUSAL = "Saya tidak dapat menemukan jawaban atas pertanyaan yang diajukan."

SENTIMENT_DICTIONARY = {
    "positive": "positif",
    "negative": "negatif",
    "neutral": "netral",
}

DEFAULT_INTENTS: tuple[str, ...] = (
    "automatic top up",
    "balance not updated after cheque or cash deposit",
    "declined card payment",
    "declined transfer",
    "edit personal details",
)
DEFAULT_NEGATIVE_INTENT = "tidak ada"

FORMALITY_KEYWORDS = ("ceremonial", "polished", "everyday", "conversational", "colloquial")
_FORMAL_KEYWORDS = ("ceremonial", "polished", "everyday")
_COLLOQUIAL_KEYWORDS = ("conversational", "colloquial")


def eval_indommlu(rec: EvalRecord, judge) -> bool:
    """Single-letter MCQ check with judge fallback for verbose answers."""
    output = str(rec.output).lower()
    answer = str(rec.answer).lower()
    if len(output) == 1:
        return output[0] == answer
    if len(output) > 1 and output[1] == ".":
        return output[0] == answer
    verdict = judge.ask(TEMPLATE_MCQ, {
        "options": rec.options or "",
        "output_text": output,
        "answer": answer,
    })
    return verdict.is_yes


def eval_id_en(rec: EvalRecord, judge) -> bool:
    """Binary entailment over the pre-mapped output column."""
    answer = str(rec.answer).strip()
    output = str(rec.output_mapped if rec.output_mapped is not None else "").strip()
    if output in ("1", "0"):
        return output == answer
    verdict = judge.ask(TEMPLATE_EQUALITY, {
        "output_text": output,
        "expected_answer": answer,
    })
    return verdict.is_yes


@dataclass(frozen=True)
class IdEnKeywordMapper:
    """Optional raw-output-to-label mapper for the entailment task; off by default.

    The task normally consumes a provided mapped column. When enabled, this
    fills a missing column from configurable keyword lists; outputs matching
    neither or both lists pass through unchanged and reach the judge.
    """

    yes_keywords: tuple[str, ...]
    no_keywords: tuple[str, ...]

    def map(self, output: str) -> str:
        lowered = output.lower()
        hits_no = any(k.lower() in lowered for k in self.no_keywords)
        hits_yes = any(k.lower() in lowered for k in self.yes_keywords)
        if hits_yes and not hits_no:
            return "1"
        if hits_no and not hits_yes:
            return "0"
        return output


def eval_containment(rec: EvalRecord, judge) -> bool:
    """Shared by xcopa_id and tydiqa_id: gold answer contained in the output."""
    answer = str(rec.answer)
    output = str(rec.output)
    if answer.lower() in output.lower():
        return True
    if QA_REFUSAL.lower() in output.lower():
        return False
    verdict = judge.ask(TEMPLATE_CONTAINMENT, {
        "generated_answer": output,
        "actual_answer": answer,
    })
    return verdict.is_yes


def check_occurrence(sentence: str, words: Sequence[str]) -> bool:
    """True when at least two of the given phrases occur in the sentence."""
    count = sum(1 for word in words if word.lower() in sentence.lower())
    return count >= 2


def map_intent(output, intent_list: Sequence[str] = DEFAULT_INTENTS,
               negative: str = DEFAULT_NEGATIVE_INTENT) -> str:
    """Map free-form output to an intent label; ambiguous or foreign -> negative."""
    if not isinstance(output, str):
        output = str(output)
    if check_occurrence(output, intent_list):
        return negative
    for intent in intent_list:
        if intent.lower() in output.lower():
            return intent.lower()
    return negative


def map_colloquial(output):
    """Map a formality answer to 0 (formal), 1 (colloquial) or -1 (undecidable)."""
    if output is None or isinstance(output, (int, float)):
        return -1
    if check_occurrence(output, FORMALITY_KEYWORDS):
        return -1
    if any(word in output.lower() for word in _FORMAL_KEYWORDS):
        return 0
    if any(word in output.lower() for word in _COLLOQUIAL_KEYWORDS):
        return 1
    return output.lower()


def eval_nusax_senti(rec: EvalRecord, judge) -> bool:
    """Sentiment label check with an English-to-Indonesian label dictionary."""
    output = str(rec.output).replace(".", "")
    answer = str(rec.answer)
    if " " not in output:
        output_lower = output.lower()
        answer_lower = answer.lower()
        if output_lower == answer_lower:
            return True
        if output_lower in SENTIMENT_DICTIONARY:
            return SENTIMENT_DICTIONARY[output_lower].lower() == answer_lower
        return False
    verdict = judge.ask(TEMPLATE_EQUALITY, {
        "output_text": output,
        "expected_answer": answer,
    })
    return verdict.is_yes


def eval_hatespeech(rec: EvalRecord, judge) -> bool:
    """Binary label check after stripping periods."""
    answer = str(rec.answer).strip()
    output = str(rec.output).strip().replace(".", "")
    if len(output) == 1:
        return output == answer
    if len(output) > 1 and output[0] in ("1", "0"):
        return output[0] == answer
    # Empty output cannot be decided heuristically; defer to the judge.
    verdict = judge.ask(TEMPLATE_EQUALITY, {
        "output_text": output,
        "expected_answer": answer,
    })
    return verdict.is_yes
