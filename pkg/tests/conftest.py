"""Shared fixtures and the acceptance summary printer."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from nusakit import tokenizer as tok
from nusakit.embedding import EmbeddingMatrix, save_matrix

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        _ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        slug = name.removeprefix("test_criterion_")
        number, _, rest = slug.partition("_")
        line = f"criterion {int(number):2d} ({rest}): {_ACCEPTANCE_RESULTS[name]}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def toy_model() -> tok.TokenizerModel:
    """Small vocabulary with whole-word, subword and syllable tokens."""
    marker = tok.WORD_START_MARKER
    words = ["makan", "nasi", "pagi", "halo", "dunia", "saya", "dan", "yang", "di", "ke"]
    syllables = ["ma", "kan", "na", "si", "pa", "gi", "ru", "mah", "ba", "bu",
                 "da", "du", "ha", "lo", "ya", "sa", "ka", "la", "nga", "ta",
                 "a", "b", "c", "d", "e", "g", "h", "i", "k", "l",
                 "m", "n", "o", "p", "r", "s", "t", "u", "w", "y"]
    return tok.make_model([marker + w for w in words] + syllables)


@pytest.fixture(scope="session")
def pipeline_workspace(tmp_path_factory) -> Path:
    """A directory with everything the CLI pipeline needs: corpus, model, matrices, config."""
    root = tmp_path_factory.mktemp("pipeline")
    build_workspace(root)
    return root


def build_workspace(root: Path) -> None:
    for name in ("corpus.jsonl", "judge_fixtures.json"):
        (root / name).write_bytes((FIXTURES / name).read_bytes())
    tasks_dir = root / "tasks"
    tasks_dir.mkdir()
    for task_file in sorted((FIXTURES / "tasks").glob("*.jsonl")):
        (tasks_dir / task_file.name).write_bytes(task_file.read_bytes())

    marker = tok.WORD_START_MARKER
    words = ["dan", "yang", "di", "ke", "ini", "itu", "the", "and", "of", "is"]
    syllables = [c for c in "abcdefghijklmnopqrstuvwxyz"] + [
        "an", "ar", "at", "ba", "bu", "da", "en", "er", "ga", "ha",
        "in", "ka", "la", "ma", "na", "ng", "pa", "ra", "sa", "ta", "un", "wa"]
    base = tok.make_model([marker + w for w in words] + syllables, pad_to_multiple=True)
    tok.save_model(base, root / "base_model.vocab")

    rng = np.random.default_rng(20240331)
    before = EmbeddingMatrix(rows=rng.normal(size=(40, 8)), token_ids=tuple(range(40)))
    after = EmbeddingMatrix(rows=before.rows + 0.25 * rng.normal(size=(40, 8)),
                            token_ids=tuple(range(40)))
    save_matrix(before, root / "embeddings_before.bin")
    save_matrix(after, root / "embeddings_after.bin")

    config = {
        "seed": 1234,
        "output_dir": "out",
        "corpus": {"input": "corpus.jsonl", "format": "jsonl"},
        "filter": {"min_words": 20, "max_words": 5000},
        "tokenizer": {"base_model": "base_model.vocab",
                      "indonesian_top_n": 30, "regional_top_n": 20},
        "embedding": {"matrix": "embeddings_before.bin", "extend_count": 4,
                      "selection": list(range(12)),
                      "labels": [f"w{i}" for i in range(12)],
                      "compare_matrix": "embeddings_after.bin"},
        "parallel": {"languages": ["english", "indonesian"], "start_policy": "round_robin",
                     "client": "stub"},
        "eval": {
            "model_name": "fixture-model",
            "judge": "stub",
            "judge_fixtures": "judge_fixtures.json",
            "tasks": [
                {"name": name, "records": f"tasks/{name}.jsonl"}
                for name in ("indommlu", "id_en", "xcopa_id", "intent", "colloquial",
                             "nusax_senti", "id_hatespeech", "nusax_mt", "tydiqa_id",
                             "indosum")
            ],
        },
    }
    (root / "config.json").write_text(json.dumps(config, indent=2), encoding="utf-8")
