"""Alternate-parallel bilingual document construction.

A source document is sentence-split, fully aligned with its translation, and
re-emitted with sentences alternating between the two languages so that
next-token prediction must attend across languages. The translation engine is
a pluggable client; the offline stub keeps pipelines hermetic and reversible.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .corpus import Corpus, Document, split_sentences
from .errors import ConfigError, DataError, TranslationError
from .languages import LanguageTag

ENV_TRANSLATE_ENDPOINT = "NUSAKIT_TRANSLATE_ENDPOINT"
ENV_TRANSLATE_API_KEY = "NUSAKIT_TRANSLATE_API_KEY"

ORIGIN_ALIGNED = "aligned_corpus"
ORIGIN_MT = "machine_translated"


@dataclass(frozen=True)
class ParallelPair:
    src_lang: LanguageTag
    tgt_lang: LanguageTag
    src_sentences: tuple[str, ...]
    tgt_sentences: tuple[str, ...]
    origin: str

    def __post_init__(self) -> None:
        if self.src_lang == self.tgt_lang:
            raise DataError("pair languages must be distinct")
        if len(self.src_sentences) != len(self.tgt_sentences):
            raise DataError("src and tgt sentence lists must have equal length")
        if not self.src_sentences:
            raise DataError("a pair needs at least one sentence")
        if self.origin not in (ORIGIN_ALIGNED, ORIGIN_MT):
            raise DataError(f"unknown pair origin {self.origin!r}")


@dataclass(frozen=True)
class AlternatingDocument:
    sentences: tuple[tuple[str, LanguageTag], ...]
    pattern: tuple[LanguageTag, LanguageTag]  # (start_lang, other_lang)
    source_doc_id: str

    def __post_init__(self) -> None:
        for (_, a), (_, b) in zip(self.sentences, self.sentences[1:]):
            if a == b:
                raise DataError("consecutive sentences must switch languages")


class TranslationClient(Protocol):
    max_concurrency: int

    def translate(self, text: str, src: LanguageTag, tgt: LanguageTag) -> str: ...


class TranslationCache:
    """Persistent (src, tgt, text-hash) -> translation map; writes are serialized."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[str, str, str], str] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    entry = json.loads(line)
                    key = (entry["src"], entry["tgt"], entry["hash"])
                    self._data[key] = entry["translation"]

    @staticmethod
    def key(text: str, src: LanguageTag, tgt: LanguageTag) -> tuple[str, str, str]:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return (str(src), str(tgt), digest)

    def get(self, text: str, src: LanguageTag, tgt: LanguageTag) -> str | None:
        return self._data.get(self.key(text, src, tgt))

    def put(self, text: str, src: LanguageTag, tgt: LanguageTag, translation: str) -> None:
        key = self.key(text, src, tgt)
        with self._lock:
            if key in self._data:
                return
            self._data[key] = translation
            if self.path is not None:
                entry = {"src": key[0], "tgt": key[1], "hash": key[2], "translation": translation}
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, ensure_ascii=False) + "\n")


class StubTranslationClient:
    """Offline deterministic stub: prefixes a reversible language marker."""

    max_concurrency = 1

    def __init__(self, cache: TranslationCache | None = None):
        self.cache = cache or TranslationCache()

    def translate(self, text: str, src: LanguageTag, tgt: LanguageTag) -> str:
        cached = self.cache.get(text, src, tgt)
        if cached is not None:
            return cached
        translation = f"⟦{tgt}⟧{text}"
        self.cache.put(text, src, tgt, translation)
        return translation

    @staticmethod
    def recover_source(translation: str, tgt: LanguageTag) -> str:
        prefix = f"⟦{tgt}⟧"
        if not translation.startswith(prefix):
            raise DataError("stub translation is missing its language marker")
        return translation[len(prefix):]


class HttpTranslationClient:
    """JSON-over-HTTP engine client: {q, source, target} -> {translatedText}.

    Endpoint and key come from environment variables; requests are retried
    with exponential backoff and answered from the cache when possible.
    """

    def __init__(self, cache: TranslationCache | None = None, *,
                 max_concurrency: int = 4, retries: int = 3, timeout: float = 30.0):
        self.endpoint = os.environ.get(ENV_TRANSLATE_ENDPOINT, "")
        self.api_key = os.environ.get(ENV_TRANSLATE_API_KEY, "")
        if not self.endpoint or not self.api_key:
            raise ConfigError(
                f"translation credentials missing: set {ENV_TRANSLATE_ENDPOINT} "
                f"and {ENV_TRANSLATE_API_KEY}")
        self.cache = cache or TranslationCache()
        self.max_concurrency = max_concurrency
        self.retries = retries
        self.timeout = timeout

    def translate(self, text: str, src: LanguageTag, tgt: LanguageTag) -> str:
        cached = self.cache.get(text, src, tgt)
        if cached is not None:
            return cached
        payload = {"q": text, "source": str(src), "target": str(tgt)}
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for attempt in range(self.retries):
            try:
                response = requests.post(self.endpoint, json=payload,
                                         headers=headers, timeout=self.timeout)
                response.raise_for_status()
                translation = response.json()["translatedText"]
                self.cache.put(text, src, tgt, translation)
                return translation
            except (requests.RequestException, KeyError, ValueError) as exc:
                last_error = exc
                time.sleep(0.5 * 2 ** attempt)
        raise TranslationError(f"translation failed after {self.retries} attempts: {last_error}")


def _translate_all(sentences: Sequence[str], src: LanguageTag, tgt: LanguageTag,
                   client: TranslationClient) -> list[str]:
    """Translate each sentence; bounded concurrency, order-preserving, index on failure."""
    workers = max(1, getattr(client, "max_concurrency", 1))
    if workers == 1:
        out = []
        for i, sentence in enumerate(sentences):
            try:
                out.append(client.translate(sentence, src, tgt))
            except TranslationError as exc:
                raise TranslationError(f"sentence {i}: {exc}", sentence_index=i) from exc
        return out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(client.translate, s, src, tgt) for s in sentences]
        out = []
        for i, future in enumerate(futures):
            try:
                out.append(future.result())
            except TranslationError as exc:
                raise TranslationError(f"sentence {i}: {exc}", sentence_index=i) from exc
        return out


def make_pair(doc: Document, tgt: LanguageTag, client: TranslationClient) -> ParallelPair:
    """Sentence-split a document and align it positionally with its translation."""
    if doc.lang == tgt:
        raise DataError(f"document {doc.id} is already in {tgt}")
    sentences = split_sentences(doc.text, doc.lang)
    if not sentences:
        raise DataError(f"document {doc.id} has no sentences")
    translated = _translate_all(sentences, doc.lang, tgt, client)
    return ParallelPair(
        src_lang=doc.lang,
        tgt_lang=tgt,
        src_sentences=tuple(sentences),
        tgt_sentences=tuple(translated),
        origin=ORIGIN_MT,
    )


def build_alternating(pair: ParallelPair, start: LanguageTag,
                      source_doc_id: str = "") -> AlternatingDocument:
    """Take even-index sentences from the start language and odd from the other."""
    if start == pair.src_lang:
        first, second = (pair.src_sentences, pair.src_lang), (pair.tgt_sentences, pair.tgt_lang)
    elif start == pair.tgt_lang:
        first, second = (pair.tgt_sentences, pair.tgt_lang), (pair.src_sentences, pair.src_lang)
    else:
        raise DataError(f"start language {start} is not part of the pair")
    sentences = []
    for i in range(len(pair.src_sentences)):
        texts, lang = first if i % 2 == 0 else second
        sentences.append((texts[i], lang))
    return AlternatingDocument(
        sentences=tuple(sentences),
        pattern=(first[1], second[1]),
        source_doc_id=source_doc_id,
    )


def recover_pair_sentences(alt: AlternatingDocument, pair: ParallelPair
                           ) -> tuple[list[str], list[str]]:
    """Reconstruct both monolingual sentence lists from an alternating document."""
    src, tgt = [], []
    for i, (text, lang) in enumerate(alt.sentences):
        if lang == pair.src_lang:
            src.append(text)
            tgt.append(pair.tgt_sentences[i])
        else:
            tgt.append(text)
            src.append(pair.src_sentences[i])
    return src, tgt


def enumerate_language_pairs(langs: Sequence[LanguageTag]
                             ) -> list[tuple[LanguageTag, LanguageTag]]:
    """All ordered pairs of distinct languages, in stable lexicographic order."""
    if len(set(langs)) != len(langs):
        raise DataError("languages must be distinct")
    ordered = sorted(langs, key=str)
    return [(a, b) for a in ordered for b in ordered if a != b]


START_POLICIES = ("fixed", "round_robin")


@dataclass
class _PairState:
    count: int = 0


def emit_training_docs(docs: Corpus, pairs: Sequence[tuple[LanguageTag, LanguageTag]],
                       client: TranslationClient, start_policy: str = "fixed") -> Corpus:
    """One alternating document per (document, language pair).

    Sides the document is not already written in are machine-translated.
    ``round_robin`` flips the start language across successive documents of
    the same pair so both languages open equally often.
    """
    if start_policy not in START_POLICIES:
        raise ConfigError(f"unknown start policy {start_policy!r}")
    out = Corpus()
    states: dict[tuple[LanguageTag, LanguageTag], _PairState] = {}
    for doc in docs:
        sentences = split_sentences(doc.text, doc.lang)
        if not sentences:
            raise DataError(f"document {doc.id} has no sentences")
        for a, b in pairs:
            try:
                side_a = _sentences_in(sentences, doc.lang, a, client)
                side_b = _sentences_in(sentences, doc.lang, b, client)
            except TranslationError as exc:
                raise TranslationError(f"document {doc.id}: {exc}",
                                       sentence_index=exc.sentence_index) from exc
            pair = ParallelPair(
                src_lang=a, tgt_lang=b,
                src_sentences=tuple(side_a), tgt_sentences=tuple(side_b),
                origin=ORIGIN_MT,
            )
            state = states.setdefault((a, b), _PairState())
            start = a if (start_policy == "fixed" or state.count % 2 == 0) else b
            state.count += 1
            alt = build_alternating(pair, start, source_doc_id=doc.id)
            out.append(_serialize_alternating(alt, a, b))
    return out


def _sentences_in(sentences: Sequence[str], doc_lang: LanguageTag,
                  target: LanguageTag, client: TranslationClient) -> list[str]:
    if doc_lang == target:
        return list(sentences)
    return _translate_all(sentences, doc_lang, target, client)


def _serialize_alternating(alt: AlternatingDocument, a: LanguageTag,
                           b: LanguageTag) -> Document:
    start, other = alt.pattern
    return Document(
        id=f"{alt.source_doc_id}#{a}-{b}",
        text=" ".join(text for text, _ in alt.sentences),
        lang=start,
        source="parallel",
        meta={
            "pattern": f"{start},{other}",
            "origin": ORIGIN_MT,
            "source_doc_id": alt.source_doc_id,
        },
    )
