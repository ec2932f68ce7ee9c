"""Text metrics: ROUGE-L, chrF++, accuracy, weighted F1, perplexity."""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Sequence

from ..errors import DataError

_ALNUM = re.compile(r"[^\W_]+", re.UNICODE)

CHRF_CHAR_ORDER = 6
CHRF_WORD_ORDER = 2
CHRF_BETA = 2.0


def _rouge_tokens(text: str) -> list[str]:
    return _ALNUM.findall(text.lower())


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[len(b)]


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """(recall, precision, f1) from the longest common token subsequence."""
    cand = _rouge_tokens(candidate)
    ref = _rouge_tokens(reference)
    if not cand:
        raise DataError("candidate is empty after tokenization")
    if not ref:
        raise DataError("reference is empty after tokenization")
    lcs = _lcs_length(cand, ref)
    recall = lcs / len(ref)
    precision = lcs / len(cand)
    if recall + precision == 0.0:
        return 0.0, 0.0, 0.0
    f1 = 2.0 * recall * precision / (recall + precision)
    return recall, precision, f1


def _char_ngrams(text: str, n: int) -> Counter:
    stripped = re.sub(r"\s+", "", text)
    return Counter(stripped[i:i + n] for i in range(len(stripped) - n + 1))


def _word_ngrams(text: str, n: int) -> Counter:
    words = text.split()
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def _order_f_score(cand: Counter, ref: Counter, beta: float) -> float | None:
    """F-beta for one n-gram order, or None when the order is empty on both sides."""
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    if cand_total == 0 and ref_total == 0:
        return None
    matches = sum((cand & ref).values())
    precision = matches / cand_total if cand_total else 0.0
    recall = matches / ref_total if ref_total else 0.0
    denominator = beta * beta * precision + recall
    if denominator == 0.0:
        return 0.0
    return (1.0 + beta * beta) * precision * recall / denominator


def chrf_pp(candidate: str, reference: str) -> float:
    """chrF++ in [0, 100]: character n-grams 1..6 plus word n-grams 1..2, beta=2.

    Whitespace is removed before character n-gram extraction; per-order
    F-scores are averaged uniformly over the orders populated on either side.
    """
    if not reference:
        raise DataError("reference must be nonempty")
    scores: list[float] = []
    for n in range(1, CHRF_CHAR_ORDER + 1):
        score = _order_f_score(_char_ngrams(candidate, n), _char_ngrams(reference, n),
                               CHRF_BETA)
        if score is not None:
            scores.append(score)
    for n in range(1, CHRF_WORD_ORDER + 1):
        score = _order_f_score(_word_ngrams(candidate, n), _word_ngrams(reference, n),
                               CHRF_BETA)
        if score is not None:
            scores.append(score)
    if not scores:
        return 0.0
    return 100.0 * sum(scores) / len(scores)


def accuracy(results: Sequence[bool]) -> float:
    if not results:
        raise DataError("accuracy over an empty result list")
    return 100.0 * sum(bool(r) for r in results) / len(results)


def weighted_f1(predictions: Sequence[str], golds: Sequence[str]) -> float:
    """Per-gold-class F1 averaged with gold-support weights, as a percentage."""
    if len(predictions) != len(golds):
        raise DataError(f"length mismatch: {len(predictions)} predictions, {len(golds)} golds")
    if not golds:
        raise DataError("weighted_f1 over empty inputs")
    support = Counter(golds)
    total = 0.0
    for label, count in support.items():
        tp = sum(1 for p, g in zip(predictions, golds) if p == label and g == label)
        fp = sum(1 for p, g in zip(predictions, golds) if p == label and g != label)
        fn = count - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (2 * precision * recall / (precision + recall)) if precision + recall else 0.0
        total += count * f1
    return 100.0 * total / len(golds)


def perplexity(logprobs: Sequence[float]) -> float:
    """exp(-mean(logprobs)) over natural-log token probabilities."""
    if not logprobs:
        raise DataError("perplexity over an empty logprob list")
    bad = [lp for lp in logprobs if lp > 0.0]
    if bad:
        raise DataError(f"log probabilities must be <= 0 (got {bad[0]})")
    return math.exp(-sum(logprobs) / len(logprobs))
