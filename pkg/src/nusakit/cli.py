"""Command-line entry point wiring the modules into reproducible pipeline runs.

Exit codes: 0 success, 2 configuration error, 3 data error. Every command is
deterministic given (config, seed, stubbed clients) and writes a resolved
config snapshot next to its outputs; validation failures happen before any
output file is touched.
"""

from __future__ import annotations

import functools
import json
import sys
from collections import Counter
from pathlib import Path

import click

from . import embedding as emb
from . import tokenizer as tok
from .config import PipelineConfig
from .corpus import Corpus, load_corpus, save_corpus
from .errors import ConfigError, DataError, NusakitError
from .eval import (
    TASKS,
    FixtureJudgeClient,
    HttpJudgeClient,
    IdEnKeywordMapper,
    JudgeAudit,
    aggregate,
    load_records,
    run_task,
    scoreboard_csv,
    scoreboard_from_tasks,
    scoreboard_markdown,
)
from .languages import INDONESIAN, LanguageTag, REGIONAL_LANGUAGES
from .parallel import (
    HttpTranslationClient,
    StubTranslationClient,
    TranslationCache,
    emit_training_docs,
    enumerate_language_pairs,
)
from .preprocess import (
    apply_quality_filter,
    exact_dedup,
    near_dedup,
    repetition_profile,
    save_reports,
)

EXIT_CONFIG_ERROR = 2
EXIT_DATA_ERROR = 3


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG_ERROR)
        except (DataError, NusakitError) as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(EXIT_DATA_ERROR)
    return wrapper


def _load_config(config_path: str, overrides: tuple[str, ...]) -> PipelineConfig:
    parsed = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        key, value = item.split("=", 1)
        parsed[key] = value
    return PipelineConfig.load(config_path, parsed)


@click.group()
def main() -> None:
    """Corpus curation, vocabulary expansion, and evaluation pipeline."""


_config_option = click.option("--config", "config_path", required=True,
                              type=click.Path(), help="Pipeline config JSON.")
_set_option = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                           help="Override a config value (repeatable).")


@main.command("preprocess")
@_config_option
@_set_option
@_handle_errors
def cmd_preprocess(config_path: str, overrides: tuple[str, ...]) -> None:
    """Quality-filter a corpus, then remove exact and near duplicates."""
    config = _load_config(config_path, overrides)
    input_path = config.path("corpus.input")
    filter_config = config.filter_config()
    out_dir = config.output_dir()

    corpus = load_corpus(input_path, str(config.data["corpus"].get("format", "jsonl")))
    out_dir.mkdir(parents=True, exist_ok=True)

    kept = Corpus()
    with open(out_dir / "filter_decisions.jsonl", "w", encoding="utf-8") as fh:
        for doc in corpus:
            decision = apply_quality_filter(doc, repetition_profile(doc), filter_config)
            fh.write(json.dumps({"id": doc.id, "keep": decision.keep,
                                 "reasons": decision.reasons}, ensure_ascii=False) + "\n")
            if decision.keep:
                kept.append(doc)

    deduped, exact_report = exact_dedup(kept)
    final, near_report = near_dedup(deduped, filter_config)
    save_corpus(final, out_dir / "corpus_filtered.jsonl")
    save_reports([exact_report, near_report], out_dir / "dedup_reports.jsonl")
    config.write_snapshot(out_dir, "preprocess")
    click.echo(f"kept {len(final)}/{len(corpus)} documents "
               f"(filtered {len(corpus) - len(kept)}, "
               f"exact dups {len(exact_report.removed_ids)}, "
               f"near dups {len(near_report.removed_ids)})")


def _merged_regional_table(corpus: Corpus) -> tok.WordFrequencyTable:
    counts: Counter[str] = Counter()
    for lang in REGIONAL_LANGUAGES:
        counts.update(tok.word_frequencies(corpus, lang).counts)
    return tok.WordFrequencyTable(lang=LanguageTag("other", "regional"), counts=dict(counts))


def _fertility_buckets(report: tok.FertilityReport) -> dict[str, tok.FertilityEntry]:
    """Aggregate per-language fertility into indonesian/regional/english buckets."""
    buckets: dict[str, list[tok.FertilityEntry]] = {}
    for lang, entry in report.per_lang.items():
        if lang.code in ("indonesian", "english"):
            name = lang.code
        elif lang.is_regional:
            name = "regional"
        else:
            name = "other"
        buckets.setdefault(name, []).append(entry)
    return {
        name: tok.FertilityEntry(
            token_count=sum(e.token_count for e in entries),
            word_count=sum(e.word_count for e in entries),
        )
        for name, entries in buckets.items()
    }


_CSV_BUCKETS = ("indonesian", "regional", "english")


def _fertility_csv(rows: list[tuple[str, dict[str, tok.FertilityEntry], int,
                                    dict[str, float]]]) -> str:
    header = (["model"] + [f"{b}_mean_fertility" for b in _CSV_BUCKETS] + ["vocab_size"]
              + [f"{b}_improvement_pct" for b in _CSV_BUCKETS])
    lines = [",".join(header)]
    for model_name, buckets, vocab_size, improvement in rows:
        cells = [model_name]
        for bucket in _CSV_BUCKETS:
            mean = buckets.get(bucket, tok.FertilityEntry()).mean_fertility
            cells.append("" if mean is None else f"{mean:.3f}")
        cells.append(str(vocab_size))
        for bucket in _CSV_BUCKETS:
            value = improvement.get(bucket)
            cells.append("" if value is None else f"{value:.2f}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


@main.command("vocab")
@_config_option
@_set_option
@_handle_errors
def cmd_vocab(config_path: str, overrides: tuple[str, ...]) -> None:
    """Expand the tokenizer vocabulary from corpus word frequencies."""
    config = _load_config(config_path, overrides)
    corpus_path = config.path("corpus.input")
    model_path = config.path("tokenizer.base_model")
    section = config.data["tokenizer"]
    out_dir = config.output_dir()

    corpus = load_corpus(corpus_path, str(config.data["corpus"].get("format", "jsonl")))
    base = tok.load_model(model_path)

    indo_words = tok.select_new_words(
        tok.word_frequencies(corpus, INDONESIAN), base, int(section["indonesian_top_n"]))
    regional_words = tok.select_new_words(
        _merged_regional_table(corpus), base, int(section["regional_top_n"]))
    words = list(dict.fromkeys(indo_words + regional_words))
    extended = tok.extend_vocab(base, words)

    base_report = tok.fertility(base, corpus)
    new_report = tok.fertility(extended, corpus)
    base_buckets = _fertility_buckets(base_report)
    new_buckets = _fertility_buckets(new_report)
    improvement: dict[str, float] = {}
    for bucket in _CSV_BUCKETS:
        b = base_buckets.get(bucket, tok.FertilityEntry()).mean_fertility
        n = new_buckets.get(bucket, tok.FertilityEntry()).mean_fertility
        if b is not None and n is not None and b > 0:
            improvement[bucket] = round(100.0 * (b - n) / b, 2)

    out_dir.mkdir(parents=True, exist_ok=True)
    tok.save_model(extended, out_dir / "tokenizer_extended.vocab")
    (out_dir / "fertility.csv").write_text(_fertility_csv([
        ("base", base_buckets, base.vocab_size, {}),
        ("extended", new_buckets, extended.vocab_size, improvement),
    ]), encoding="utf-8")
    config.write_snapshot(out_dir, "vocab")
    click.echo(f"added {len(words)} words: vocab {base.vocab_size} -> {extended.vocab_size}")


@main.command("embed")
@_config_option
@_set_option
@_handle_errors
def cmd_embed(config_path: str, overrides: tuple[str, ...]) -> None:
    """Extend an embedding matrix by mean initialization and export 2-D projections."""
    config = _load_config(config_path, overrides)
    matrix_path = config.path("embedding.matrix")
    compare_path = config.path("embedding.compare_matrix", required=False)
    if compare_path is not None and not compare_path.exists():
        raise ConfigError(f"embedding.compare_matrix: path does not exist: {compare_path}")
    section = config.data["embedding"]
    out_dir = config.output_dir()

    matrix = emb.load_matrix(matrix_path)
    extend_count = int(section.get("extend_count", 0))
    if extend_count > 0:
        next_id = max(matrix.token_ids) + 1
        matrix = emb.extend_embeddings(matrix, list(range(next_id, next_id + extend_count)))

    selection = [int(i) for i in section.get("selection") or []]
    if not selection:
        selection = list(matrix.token_ids)
    labels = [str(x) for x in section.get("labels") or []]
    if not labels:
        labels = [str(i) for i in selection]
    if len(labels) != len(selection):
        raise ConfigError("embedding.labels must align with embedding.selection")

    projection = emb.pca2(matrix, selection, labels)
    compare_projection = None
    if compare_path is not None:
        compare = emb.load_matrix(compare_path)
        compare_projection = emb.pca2(compare, selection, labels)

    out_dir.mkdir(parents=True, exist_ok=True)
    emb.save_matrix(matrix, out_dir / "embeddings_extended.bin")
    emb.save_projection_csv(projection, out_dir / "projection.csv")
    if compare_projection is not None:
        emb.save_projection_csv(compare_projection, out_dir / "projection_compare.csv")
    config.write_snapshot(out_dir, "embed")
    click.echo(f"matrix {len(matrix)}x{matrix.d}; projected {len(selection)} rows")


@main.command("parallel")
@_config_option
@_set_option
@_handle_errors
def cmd_parallel(config_path: str, overrides: tuple[str, ...]) -> None:
    """Build alternate-parallel documents for every configured language pair."""
    config = _load_config(config_path, overrides)
    corpus_path = config.path("corpus.input")
    section = config.data["parallel"]
    out_dir = config.output_dir()

    langs = [LanguageTag.parse(code) for code in section.get("languages") or []]
    if len(langs) < 2:
        raise ConfigError("parallel.languages needs at least two languages")
    cache_path = section.get("cache") or None
    cache = TranslationCache(cache_path) if cache_path else TranslationCache()
    mode = str(section.get("client", "stub"))
    if mode == "stub":
        client = StubTranslationClient(cache)
    elif mode == "http":
        client = HttpTranslationClient(cache)  # raises ConfigError without credentials
    else:
        raise ConfigError(f"unknown parallel.client {mode!r}")

    corpus = load_corpus(corpus_path, str(config.data["corpus"].get("format", "jsonl")))
    pairs = enumerate_language_pairs(langs)
    result = emit_training_docs(corpus, pairs, client,
                                str(section.get("start_policy", "fixed")))
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(result, out_dir / "parallel_corpus.jsonl")
    config.write_snapshot(out_dir, "parallel")
    click.echo(f"emitted {len(result)} documents ({len(corpus)} docs x {len(pairs)} pairs)")


def _judge_from_config(section: dict, base_dir: Path):
    mode = str(section.get("judge", "stub"))
    if mode == "http":
        return HttpJudgeClient()  # raises ConfigError without credentials
    if mode != "stub":
        raise ConfigError(f"unknown eval.judge {mode!r}")
    fixtures: dict[tuple, str] = {}
    default = "No"
    fixture_path = section.get("judge_fixtures") or ""
    if fixture_path:
        path = Path(fixture_path)
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise ConfigError(f"judge fixture file not found: {path}")
        data = json.loads(path.read_text(encoding="utf-8"))
        default = str(data.get("default", "No"))
        for entry in data.get("entries", []):
            key = (str(entry["template"]),) + tuple(str(v) for v in entry["key"])
            fixtures[key] = str(entry["response"])
    return FixtureJudgeClient(fixtures, default)


@main.command("eval")
@_config_option
@_set_option
@_handle_errors
def cmd_eval(config_path: str, overrides: tuple[str, ...]) -> None:
    """Score task record files and aggregate a scoreboard."""
    config = _load_config(config_path, overrides)
    section = config.data["eval"]
    tasks = section.get("tasks") or []
    if not tasks:
        raise ConfigError("eval.tasks is empty")
    task_inputs = []
    for entry in tasks:
        name = str(entry.get("name", ""))
        if name not in TASKS:
            raise ConfigError(f"unknown task name {name!r}")
        records_path = Path(str(entry.get("records", "")))
        if not records_path.is_absolute():
            records_path = config.base_dir / records_path
        if not records_path.exists():
            raise ConfigError(f"task records not found: {records_path}")
        task_inputs.append((name, records_path))

    judge = _judge_from_config(section, config.base_dir)
    exclude = [LanguageTag.parse(c) for c in section.get("exclude_langs") or []]
    id_en_mapper = None
    mapper_section = section.get("id_en_mapper") or {}
    if mapper_section:  # opt-in: the mapped column is normally a provided input
        id_en_mapper = IdEnKeywordMapper(
            yes_keywords=tuple(mapper_section.get("yes_keywords") or ()),
            no_keywords=tuple(mapper_section.get("no_keywords") or ()),
        )
    out_dir = config.output_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    audit = JudgeAudit(out_dir / "judge_audit.jsonl")

    scores = []
    for name, records_path in task_inputs:
        records = load_records(records_path)
        scores.append(run_task(TASKS[name], records, judge, audit=audit,
                               exclude_langs=exclude, id_en_mapper=id_en_mapper))
    board = scoreboard_from_tasks(scores, str(section.get("model_name", "model")))

    (out_dir / "scoreboard.csv").write_text(scoreboard_csv([board]), encoding="utf-8")
    (out_dir / "scoreboard.md").write_text(scoreboard_markdown([board]), encoding="utf-8")
    with open(out_dir / "task_scores.jsonl", "w", encoding="utf-8") as fh:
        for score in scores:
            fh.write(json.dumps({
                "task": score.task.name,
                "value": score.value,
                "n": score.n,
                "judge_calls": score.judge_calls,
                "flagged": score.flagged,
            }, ensure_ascii=False) + "\n")
    config.write_snapshot(out_dir, "eval")
    click.echo(f"{board.model_name}: average {board.average:.1f} over {len(scores)} tasks")


@main.command("report")
@click.option("--scores", "scores_path", required=True, type=click.Path(),
              help="JSON file: {\"models\": {name: {task: value}}}.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory for scoreboard files.")
@_handle_errors
def cmd_report(scores_path: str, out_dir: str) -> None:
    """Aggregate precomputed per-task values into scoreboard files."""
    path = Path(scores_path)
    if not path.exists():
        raise ConfigError(f"scores file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"scores file is not valid JSON: {exc.msg}") from exc
    models = data.get("models")
    if not isinstance(models, dict) or not models:
        raise DataError("scores file must contain a nonempty 'models' object")
    boards = []
    for model_name, values in models.items():
        if not isinstance(values, dict) or not values:
            raise DataError(f"model {model_name!r} has no task values")
        boards.append(aggregate({str(k): float(v) for k, v in values.items()}, model_name))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "scoreboard.csv").write_text(scoreboard_csv(boards), encoding="utf-8")
    (out / "scoreboard.md").write_text(scoreboard_markdown(boards), encoding="utf-8")
    for board in boards:
        click.echo(f"{board.model_name}: {board.average:.1f}")


if __name__ == "__main__":
    main()
