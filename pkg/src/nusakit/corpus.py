"""Document and corpus handling: ingestion, normalization, sentence splitting, stats.

Everything downstream (filtering, dedup, fertility, alternating documents)
consumes the types defined here. One global word definition is used across
the whole toolkit: a word is a maximal run of non-whitespace characters.
"""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError, DataError
from .languages import LanguageTag

DEFAULT_ABBREVIATIONS: tuple[str, ...] = ("Dr.", "dr.", "No.", "Prof.")

_SENTENCE_FINAL = ".!?"


def normalize_text(text: str) -> str:
    """Ingestion normalization: strip BOM, LF line endings, NFC, trim trailing ws per line."""
    if text.startswith("﻿"):
        text = text[1:]
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = unicodedata.normalize("NFC", text)
    return "\n".join(line.rstrip() for line in text.split("\n"))


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    lang: LanguageTag
    source: str = ""
    meta: dict[str, str] = field(default_factory=dict)

    def word_count(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class CorpusStats:
    doc_count: int
    word_count_by_lang: dict[LanguageTag, int]
    char_count_by_lang: dict[LanguageTag, int]

    @property
    def word_count(self) -> int:
        return sum(self.word_count_by_lang.values())

    @property
    def char_count(self) -> int:
        return sum(self.char_count_by_lang.values())


class Corpus:
    """An ordered collection of documents. Iteration order is ingestion order."""

    def __init__(self, docs: Iterable[Document] = ()):
        self.docs: list[Document] = list(docs)
        self._stats_cache: CorpusStats | None = None

    def __iter__(self) -> Iterator[Document]:
        return iter(self.docs)

    def __len__(self) -> int:
        return len(self.docs)

    def __getitem__(self, index: int) -> Document:
        return self.docs[index]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Corpus) and self.docs == other.docs

    def append(self, doc: Document) -> None:
        self._stats_cache = None
        self.docs.append(doc)

    @property
    def stats_cache(self) -> CorpusStats | None:
        return self._stats_cache

    def stats(self) -> CorpusStats:
        if self._stats_cache is None:
            self._stats_cache = corpus_stats(self)
        return self._stats_cache


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Recompute stats from scratch; order-independent by construction."""
    words: Counter[LanguageTag] = Counter()
    chars: Counter[LanguageTag] = Counter()
    for doc in corpus:
        words[doc.lang] += len(doc.text.split())
        chars[doc.lang] += len(doc.text)  # Unicode scalar values, not bytes
    return CorpusStats(
        doc_count=len(corpus),
        word_count_by_lang=dict(words),
        char_count_by_lang=dict(chars),
    )


def _document_from_record(record: dict, line_no: int, seen_ids: set[str]) -> Document:
    if not isinstance(record, dict):
        raise DataError(f"line {line_no}: record is not an object")
    for key in ("id", "text", "lang"):
        if key not in record:
            raise DataError(f"line {line_no}: missing required key {key!r}")
    doc_id = str(record["id"])
    if doc_id in seen_ids:
        raise DataError(f"line {line_no}: duplicate document id {doc_id!r}")
    text = normalize_text(str(record["text"]))
    if not text.strip():
        raise DataError(f"line {line_no}: document {doc_id!r} is empty after normalization")
    meta: dict[str, str] = {}
    raw_meta = record.get("meta") or {}
    if not isinstance(raw_meta, dict):
        raise DataError(f"line {line_no}: meta must be an object")
    for k, v in raw_meta.items():
        meta[str(k)] = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
    # Unknown top-level keys are preserved so jsonl round trips are lossless.
    for k, v in record.items():
        if k not in ("id", "text", "lang", "source", "meta"):
            meta[str(k)] = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
    seen_ids.add(doc_id)
    return Document(
        id=doc_id,
        text=text,
        lang=LanguageTag.parse(str(record["lang"])),
        source=str(record.get("source", "")),
        meta=meta,
    )


def load_corpus(path: str | Path, fmt: str = "jsonl", *,
                lang_sidecar: str = "languages.json") -> Corpus:
    """Load a corpus from a jsonl file or a directory of text files.

    text_dir mode maps one file to one document; language comes from an
    optional sidecar JSON (filename -> code) and defaults to ``other``.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"input path does not exist: {path}")
    if fmt == "jsonl":
        docs: list[Document] = []
        seen: set[str] = set()
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
                docs.append(_document_from_record(record, line_no, seen))
        return Corpus(docs)
    if fmt == "text_dir":
        if not path.is_dir():
            raise ConfigError(f"not a directory: {path}")
        lang_map: dict[str, str] = {}
        sidecar = path / lang_sidecar
        if sidecar.exists():
            lang_map = json.loads(sidecar.read_text(encoding="utf-8"))
        docs = []
        seen = set()
        for file in sorted(path.iterdir()):
            if file.is_dir() or file.name == lang_sidecar:
                continue
            text = normalize_text(file.read_text(encoding="utf-8"))
            if not text.strip():
                raise DataError(f"file {file.name}: empty after normalization")
            if file.name in seen:
                raise DataError(f"duplicate document id {file.name!r}")
            seen.add(file.name)
            docs.append(Document(
                id=file.name,
                text=text,
                lang=LanguageTag.parse(lang_map.get(file.name, "other")),
                source=str(file),
            ))
        return Corpus(docs)
    raise ConfigError(f"unknown corpus format {fmt!r}")


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            record: dict = {"id": doc.id, "text": doc.text, "lang": str(doc.lang)}
            if doc.source:
                record["source"] = doc.source
            if doc.meta:
                record["meta"] = doc.meta
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _is_initial(token: str) -> bool:
    # Single-letter initials such as "A." never end a sentence.
    return len(token) == 2 and token[1] == "." and token[0].isalpha()


def split_sentences(text: str, lang: LanguageTag | None = None,
                    abbreviations: Sequence[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Rule-based sentence splitting.

    Splits after '.', '!' or '?' followed by whitespace unless the token
    ending there is a known abbreviation or a single-letter initial.
    Joining the result with single spaces and collapsing whitespace always
    reproduces the input with collapsed whitespace.
    """
    abbrev = set(abbreviations)
    sentences: list[str] = []
    start = 0
    for i, ch in enumerate(text):
        if ch not in _SENTENCE_FINAL:
            continue
        if i + 1 >= len(text) or not text[i + 1].isspace():
            continue
        token_start = i
        while token_start > 0 and not text[token_start - 1].isspace():
            token_start -= 1
        token = text[token_start:i + 1]
        if ch == "." and (token in abbrev or _is_initial(token)):
            continue
        sentence = text[start:i + 1].strip()
        if sentence:
            sentences.append(sentence)
        start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
