"""Subword tokenizer model: encoding, word-based vocabulary expansion, fertility.

The model is a plain ordered vocabulary. Segmentation is greedy longest-match
over marker-prefixed words with byte fallback, chosen so that adding a whole
word to the vocabulary makes that word encode as a single token. Encoding and
decoding round-trip exactly for arbitrary Unicode input.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import DataError
from .languages import LanguageTag

WORD_START_MARKER = "▁"  # "▁"
PAD_TOKEN_PATTERN = re.compile(r"<pad_extra_\d+>\Z")
VOCAB_ALIGNMENT = 64

BYTE_TOKENS: tuple[str, ...] = tuple(f"<0x{i:02X}>" for i in range(256))


def _is_byte_token(token: str) -> bool:
    return len(token) == 6 and token.startswith("<0x") and token.endswith(">")


@dataclass(frozen=True)
class TokenizerModel:
    """Ordered token vocabulary; token id = position in ``tokens``."""

    tokens: tuple[str, ...]
    word_start_marker: str = WORD_START_MARKER
    byte_fallback_count: int = 256
    version: str = "1"

    def __post_init__(self) -> None:
        if len(set(self.tokens)) != len(self.tokens):
            raise DataError("token strings must be unique")
        missing = [t for t in BYTE_TOKENS if t not in self._token_to_id]
        if missing:
            raise DataError(f"byte fallback tokens missing (first: {missing[0]})")
        if self.word_start_marker not in self._token_to_id:
            raise DataError(f"word start marker token {self.word_start_marker!r} missing")

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    @cached_property
    def _token_to_id(self) -> dict[str, int]:
        return {tok: i for i, tok in enumerate(self.tokens)}

    @cached_property
    def _byte_ids(self) -> tuple[int, ...]:
        return tuple(self._token_to_id[t] for t in BYTE_TOKENS)

    @cached_property
    def _byte_id_set(self) -> frozenset[int]:
        return frozenset(self._byte_ids)

    @cached_property
    def _matchable(self) -> tuple[frozenset[str], int, frozenset[str], int]:
        """(marker-initial tokens, max len, plain tokens, max len); reserved tokens excluded."""
        marker, plain = [], []
        for tok in self.tokens:
            if _is_byte_token(tok) or PAD_TOKEN_PATTERN.match(tok):
                continue
            (marker if tok.startswith(self.word_start_marker) else plain).append(tok)
        return (
            frozenset(marker), max((len(t) for t in marker), default=0),
            frozenset(plain), max((len(t) for t in plain), default=0),
        )

    def token_id(self, token: str) -> int | None:
        return self._token_to_id.get(token)

    def has_word(self, word: str) -> bool:
        """True if the word's marker-prefixed form is a single vocabulary token."""
        return (self.word_start_marker + word) in self._token_to_id


def make_model(tokens: Iterable[str] = (), *, pad_to_multiple: bool = False) -> TokenizerModel:
    """Assemble a model from the reserved prefix (byte tokens, marker) plus ``tokens``."""
    body = [t for t in tokens if t not in BYTE_TOKENS and t != WORD_START_MARKER]
    all_tokens = list(BYTE_TOKENS) + [WORD_START_MARKER] + body
    model = TokenizerModel(tokens=tuple(all_tokens))
    if pad_to_multiple:
        model = extend_vocab(model, [])
    return model


def _emit_bytes(model: TokenizerModel, chunk: str, ids: list[int]) -> None:
    for byte in chunk.encode("utf-8"):
        ids.append(model._byte_ids[byte])


def _encode_segment(model: TokenizerModel, segment: str, ids: list[int],
                    word_start: bool) -> None:
    """Greedy longest-match of one word; marker-initial tokens only at a marked start."""
    marker_set, marker_max, plain_set, plain_max = model._matchable
    marker = model.word_start_marker
    symbols = marker + segment if word_start else segment
    i = 0
    while i < len(symbols):
        if i == 0 and word_start:
            pool, max_len = marker_set, marker_max
        else:
            pool, max_len = plain_set, plain_max
        matched = None
        for length in range(min(max_len, len(symbols) - i), 0, -1):
            candidate = symbols[i:i + length]
            if candidate in pool:
                matched = candidate
                break
        if matched is not None:
            ids.append(model._token_to_id[matched])
            i += len(matched)
        else:
            # Bare marker is always in the vocabulary, so this is a real character.
            _emit_bytes(model, symbols[i], ids)
            i += 1


_RUNS = re.compile(r"(\s+)|\S+")


def encode(model: TokenizerModel, text: str) -> list[int]:
    """Encode text to token ids; ``decode`` reproduces the input exactly.

    Words are marker-prefixed and greedily matched. The marker absorbs a
    single preceding space; whitespace that is not a plain inter-word space
    (runs, tabs, newlines, leading whitespace) is byte-encoded, and a word
    not preceded by a space is matched without the marker.
    """
    ids: list[int] = []
    at_start = True
    pending_ws: str | None = None
    for match in _RUNS.finditer(text):
        run = match.group()
        # Classify by the regex group: str.isspace() disagrees with \s on
        # U+001C..U+001F and would misroute words starting with them.
        if match.group(1) is not None:
            pending_ws = run
            continue
        if at_start and pending_ws is None:
            _encode_segment(model, run, ids, word_start=True)  # dummy leading space
        elif at_start:
            _emit_bytes(model, pending_ws, ids)
            _encode_segment(model, run, ids, word_start=False)
        elif pending_ws is not None and pending_ws.endswith(" "):
            if len(pending_ws) > 1:
                _emit_bytes(model, pending_ws[:-1], ids)
            _encode_segment(model, run, ids, word_start=True)
        else:
            _emit_bytes(model, pending_ws or "", ids)
            _encode_segment(model, run, ids, word_start=False)
        at_start = False
        pending_ws = None
    if pending_ws is not None:
        _emit_bytes(model, pending_ws, ids)
    return ids


def decode(model: TokenizerModel, ids: Sequence[int]) -> str:
    buf = bytearray()
    marker = model.word_start_marker
    for token_id in ids:
        token = model.tokens[token_id]
        if token_id in model._byte_id_set:
            buf.append(int(token[3:5], 16))
        elif token.startswith(marker):
            buf.extend((" " + token[len(marker):]).encode("utf-8"))
        else:
            buf.extend(token.encode("utf-8"))
    text = buf.decode("utf-8", errors="replace")
    if ids and model.tokens[ids[0]].startswith(marker) and text.startswith(" "):
        text = text[1:]  # dummy leading space introduced by the first word's marker
    return text


@dataclass(frozen=True)
class WordFrequencyTable:
    lang: LanguageTag
    counts: dict[str, int]


def word_frequencies(corpus: Corpus, lang: LanguageTag) -> WordFrequencyTable:
    """Lowercased whole-word counts over documents tagged with ``lang``."""
    counts: Counter[str] = Counter()
    for doc in corpus:
        if doc.lang == lang:
            counts.update(w.lower() for w in doc.text.split())
    return WordFrequencyTable(lang=lang, counts=dict(counts))


def select_new_words(table: WordFrequencyTable, model: TokenizerModel, n: int) -> list[str]:
    """Top-n words (not tokens) absent from the vocabulary as whole tokens.

    Ordered by count descending, ties broken lexicographically. Returns fewer
    than n when the table is exhausted.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    candidates = [w for w in table.counts if not model.has_word(w)]
    candidates.sort(key=lambda w: (-table.counts[w], w))
    return candidates[:n]


def extend_vocab(model: TokenizerModel, words: Sequence[str]) -> TokenizerModel:
    """Append marker-prefixed words, then pad the vocabulary to a multiple of 64.

    Original token ids are unchanged; padding uses named reserved tokens so
    the alignment rule stays auditable.
    """
    if len(set(words)) != len(words):
        raise DataError("words to add contain duplicates")
    new_tokens = list(model.tokens)
    existing = set(new_tokens)
    for word in words:
        token = model.word_start_marker + word
        if token not in existing:
            new_tokens.append(token)
            existing.add(token)
    pad_index = sum(1 for t in new_tokens if PAD_TOKEN_PATTERN.match(t))
    while len(new_tokens) % VOCAB_ALIGNMENT != 0:
        pad = f"<pad_extra_{pad_index}>"
        pad_index += 1
        if pad in existing:
            continue
        new_tokens.append(pad)
        existing.add(pad)
    return TokenizerModel(
        tokens=tuple(new_tokens),
        word_start_marker=model.word_start_marker,
        byte_fallback_count=model.byte_fallback_count,
        version=model.version,
    )


@dataclass(frozen=True)
class FertilityEntry:
    token_count: int = 0
    word_count: int = 0

    @property
    def mean_fertility(self) -> float | None:
        if self.word_count == 0:
            return None
        return self.token_count / self.word_count


@dataclass(frozen=True)
class FertilityReport:
    per_lang: dict[LanguageTag, FertilityEntry] = field(default_factory=dict)

    @property
    def overall(self) -> FertilityEntry:
        return FertilityEntry(
            token_count=sum(e.token_count for e in self.per_lang.values()),
            word_count=sum(e.word_count for e in self.per_lang.values()),
        )


def fertility(model: TokenizerModel, corpus: Corpus) -> FertilityReport:
    """Micro-averaged tokens-per-word, per language: total tokens / total words."""
    tokens: Counter[LanguageTag] = Counter()
    words: Counter[LanguageTag] = Counter()
    for doc in corpus:
        tokens[doc.lang] += len(encode(model, doc.text))
        words[doc.lang] += len(doc.text.split())
    langs = set(tokens) | set(words)
    return FertilityReport(per_lang={
        lang: FertilityEntry(token_count=tokens[lang], word_count=words[lang])
        for lang in langs
    })


def fertility_improvement(base: FertilityReport, new: FertilityReport
                          ) -> dict[LanguageTag, float]:
    """Percentage fertility reduction per language, two decimals; lower fertility is better."""
    out: dict[LanguageTag, float] = {}
    for lang, base_entry in base.per_lang.items():
        new_entry = new.per_lang.get(lang)
        if new_entry is None:
            continue
        base_mean, new_mean = base_entry.mean_fertility, new_entry.mean_fertility
        if base_mean is None or new_mean is None:
            continue
        out[lang] = round(100.0 * (base_mean - new_mean) / base_mean, 2)
    return out


def save_model(model: TokenizerModel, path: str | Path) -> None:
    """Versioned header line plus one JSON-escaped token per line (lossless Unicode)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "version": model.version,
        "word_start_marker": model.word_start_marker,
        "byte_fallback_count": model.byte_fallback_count,
        "vocab_size": model.vocab_size,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for token in model.tokens:
            fh.write(json.dumps(token) + "\n")


def load_model(path: str | Path) -> TokenizerModel:
    path = Path(path)
    if not path.exists():
        raise DataError(f"tokenizer model file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as exc:
            raise DataError(f"bad tokenizer model header: {exc.msg}") from exc
        if not isinstance(header, dict) or "vocab_size" not in header:
            raise DataError("bad tokenizer model header: missing vocab_size")
        tokens = []
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                token = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {line_no}: bad token entry ({exc.msg})") from exc
            if not isinstance(token, str):
                raise DataError(f"line {line_no}: token entry is not a string")
            tokens.append(token)
    if len(tokens) != int(header["vocab_size"]):
        raise DataError(
            f"vocab_size mismatch: header says {header['vocab_size']}, found {len(tokens)}")
    return TokenizerModel(
        tokens=tuple(tokens),
        word_start_marker=header.get("word_start_marker", WORD_START_MARKER),
        byte_fallback_count=int(header.get("byte_fallback_count", 256)),
        version=str(header.get("version", "1")),
    )
