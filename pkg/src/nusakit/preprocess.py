"""Corpus curation: repetition profiling, quality filtering, and deduplication.

The three steps are independent, thresholded document filters. Profiles and
filter decisions are pure per-document computations; deduplication has a
signature phase and a deterministic clustering phase.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .corpus import Corpus, Document
from .errors import ConfigError

TOP_NGRAM_SIZES = (2, 3, 4)
DUP_NGRAM_SIZES = (5, 6, 7, 8, 9, 10)

_GOLDEN_64 = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class RepetitionProfile:
    """Duplicate-content fractions of one document; every field lies in [0, 1].

    The same shape doubles as the threshold table in FilterConfig (upper bounds).
    """

    dup_line_frac: float = 0.0
    dup_para_frac: float = 0.0
    dup_line_char_frac: float = 0.0
    dup_para_char_frac: float = 0.0
    top_ngram_char_frac: dict[int, float] = field(default_factory=dict)
    dup_ngram_char_frac: dict[int, float] = field(default_factory=dict)

    def items(self) -> list[tuple[str, float]]:
        """Flat (rule name, value) view used by the quality filter."""
        out = [
            ("dup_line_frac", self.dup_line_frac),
            ("dup_para_frac", self.dup_para_frac),
            ("dup_line_char_frac", self.dup_line_char_frac),
            ("dup_para_char_frac", self.dup_para_char_frac),
        ]
        for n in sorted(self.top_ngram_char_frac):
            out.append((f"top_ngram_char_frac({n})", self.top_ngram_char_frac[n]))
        for n in sorted(self.dup_ngram_char_frac):
            out.append((f"dup_ngram_char_frac({n})", self.dup_ngram_char_frac[n]))
        return out

    def to_dict(self) -> dict:
        return {
            "dup_line_frac": self.dup_line_frac,
            "dup_para_frac": self.dup_para_frac,
            "dup_line_char_frac": self.dup_line_char_frac,
            "dup_para_char_frac": self.dup_para_char_frac,
            "top_ngram_char_frac": {str(k): v for k, v in self.top_ngram_char_frac.items()},
            "dup_ngram_char_frac": {str(k): v for k, v in self.dup_ngram_char_frac.items()},
        }


DEFAULT_REPETITION_THRESHOLDS = RepetitionProfile(
    dup_line_frac=0.30,
    dup_para_frac=0.30,
    dup_line_char_frac=0.20,
    dup_para_char_frac=0.20,
    top_ngram_char_frac={2: 0.20, 3: 0.18, 4: 0.16},
    dup_ngram_char_frac={5: 0.15, 6: 0.14, 7: 0.13, 8: 0.12, 9: 0.11, 10: 0.10},
)


@dataclass(frozen=True)
class NearDupConfig:
    shingle_n: int = 5
    num_hashes: int = 128
    bands: int = 16
    rows: int = 8
    jaccard_threshold: float = 0.8
    seed: int = 8191

    def validate(self) -> None:
        if self.bands * self.rows != self.num_hashes:
            raise ConfigError(
                f"bands*rows must equal num_hashes ({self.bands}*{self.rows} != {self.num_hashes})")
        if not 0.0 <= self.jaccard_threshold <= 1.0:
            raise ConfigError("jaccard_threshold must lie in [0, 1]")
        if self.shingle_n < 1:
            raise ConfigError("shingle_n must be >= 1")


@dataclass(frozen=True)
class FilterConfig:
    min_words: int = 50
    max_words: int = 100_000
    repetition_thresholds: RepetitionProfile = DEFAULT_REPETITION_THRESHOLDS
    near_dup: NearDupConfig = NearDupConfig()

    def validate(self) -> None:
        if self.min_words > self.max_words:
            raise ConfigError(f"min_words {self.min_words} > max_words {self.max_words}")
        for name, value in self.repetition_thresholds.items():
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"threshold {name} out of [0, 1]: {value}")
        self.near_dup.validate()


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reasons: list[str]

    def __post_init__(self) -> None:
        if self.keep != (not self.reasons):
            raise ValueError("keep must hold exactly when reasons is empty")


@dataclass(frozen=True)
class DedupReport:
    mode: str  # "exact" or "near"
    removed_ids: list[str]
    clusters: list[tuple[str, list[str]]]  # (kept_id, removed_ids)
    seed: int | None = None
    pairs: list[tuple[str, str, float]] = field(default_factory=list)  # verified duplicate pairs

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "removed_ids": self.removed_ids,
            "clusters": [{"kept": k, "removed": r} for k, r in self.clusters],
            "seed": self.seed,
            "pairs": [{"a": a, "b": b, "jaccard": j} for a, b, j in self.pairs],
        }


def _surplus_fractions(units: list[str]) -> tuple[float, float]:
    """(surplus occurrence fraction, surplus character fraction) for lines/paragraphs."""
    if not units:
        return 0.0, 0.0
    counts = Counter(units)
    surplus = sum(c - 1 for c in counts.values())
    total_chars = sum(len(u) for u in units)
    surplus_chars = sum((c - 1) * len(u) for u, c in counts.items())
    char_frac = surplus_chars / total_chars if total_chars else 0.0
    return surplus / len(units), char_frac


def _word_ngrams(words: list[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(words[i:i + n]) for i in range(len(words) - n + 1)]


def repetition_profile(doc: Document) -> RepetitionProfile:
    """Measure duplicate lines, paragraphs and word n-grams in one document.

    Character totals for the n-gram fractions are the characters inside
    whitespace-delimited words; blank lines are structure, not content, and
    are excluded from the line/paragraph counts.
    """
    lines = [ln for ln in doc.text.split("\n") if ln.strip()]
    paragraphs = [p.strip() for p in re.split(r"\n\s*\n", doc.text) if p.strip()]
    dup_line, dup_line_char = _surplus_fractions(lines)
    dup_para, dup_para_char = _surplus_fractions(paragraphs)

    words = doc.text.split()
    word_chars = sum(len(w) for w in words)
    top_fracs: dict[int, float] = {}
    dup_fracs: dict[int, float] = {}
    for n in TOP_NGRAM_SIZES:
        frac = 0.0
        if word_chars and len(words) >= n:
            counts = Counter(_word_ngrams(words, n))
            gram, count = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
            if count >= 2:  # an n-gram seen once is not repetition
                # Overlapping repeats can push count*len past the total; clamp to keep [0, 1].
                frac = min(1.0, count * sum(len(w) for w in gram) / word_chars)
        top_fracs[n] = frac
    for n in DUP_NGRAM_SIZES:
        frac = 0.0
        if word_chars and len(words) >= n:
            counts = Counter(_word_ngrams(words, n))
            covered: set[int] = set()
            for i in range(len(words) - n + 1):
                if counts[tuple(words[i:i + n])] > 1:
                    covered.update(range(i, i + n))
            frac = sum(len(words[i]) for i in covered) / word_chars
        dup_fracs[n] = frac

    return RepetitionProfile(
        dup_line_frac=dup_line,
        dup_para_frac=dup_para,
        dup_line_char_frac=dup_line_char,
        dup_para_char_frac=dup_para_char,
        top_ngram_char_frac=top_fracs,
        dup_ngram_char_frac=dup_fracs,
    )


def apply_quality_filter(doc: Document, profile: RepetitionProfile,
                         config: FilterConfig) -> FilterDecision:
    """Keep iff the word count is in range and every profile field is under threshold."""
    reasons: list[str] = []
    words = doc.word_count()
    if words < config.min_words:
        reasons.append(f"min_words: {words} < {config.min_words}")
    if words > config.max_words:
        reasons.append(f"max_words: {words} > {config.max_words}")
    thresholds = dict(config.repetition_thresholds.items())
    for name, value in profile.items():
        limit = thresholds.get(name)
        if limit is not None and value > limit:
            reasons.append(f"{name}: {value:.4f} > {limit:.4f}")
    return FilterDecision(keep=not reasons, reasons=reasons)


def _match_key(text: str) -> str:
    return " ".join(text.lower().split())


def exact_dedup(corpus: Corpus) -> tuple[Corpus, DedupReport]:
    """Remove exact duplicates under lowercasing + whitespace collapse; first occurrence wins."""
    by_digest: dict[str, tuple[str, str]] = {}  # digest -> (kept_id, normalized text)
    survivors: list[Document] = []
    removed: list[str] = []
    clusters: dict[str, list[str]] = {}
    for doc in corpus:
        normalized = _match_key(doc.text)
        digest = hashlib.blake2b(normalized.encode("utf-8"), digest_size=16).hexdigest()
        hit = by_digest.get(digest)
        if hit is not None and hit[1] == normalized:  # guard against digest collisions
            removed.append(doc.id)
            clusters.setdefault(hit[0], []).append(doc.id)
        else:
            by_digest[digest] = (doc.id, normalized)
            survivors.append(doc)
    report = DedupReport(
        mode="exact",
        removed_ids=removed,
        clusters=sorted(clusters.items()),
    )
    return Corpus(survivors), report


def _shingles(text: str, n: int) -> set[tuple[str, ...]]:
    words = text.lower().split()
    return {tuple(words[i:i + n]) for i in range(len(words) - n + 1)}


def shingle_jaccard(a: str, b: str, shingle_n: int) -> float:
    """Exact Jaccard similarity over word-shingle sets."""
    sa, sb = _shingles(a, shingle_n), _shingles(b, shingle_n)
    if not sa and not sb:
        return 0.0
    return len(sa & sb) / len(sa | sb)


def _shingle_hashes(shingles: set[tuple[str, ...]]) -> np.ndarray:
    values = []
    for shingle in shingles:
        digest = hashlib.blake2b(" ".join(shingle).encode("utf-8"), digest_size=8).digest()
        values.append(int.from_bytes(digest, "big"))
    return np.asarray(values, dtype=np.uint64)


def _mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer; uint64 arithmetic wraps intentionally."""
    z = x + _GOLDEN_64
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


class MinHasher:
    """MinHash signatures from seeded independent mixers, deterministic for a given seed.

    Each hash function xors the 64-bit shingle digest with a per-function
    random constant and scrambles it; a plain affine map over a small hash
    range keeps the argmin nearly deterministic and badly biases Jaccard
    estimates, so a full-width mixer is required here.
    """

    def __init__(self, num_hashes: int, seed: int):
        rng = np.random.default_rng(seed)
        self.salts = rng.integers(0, 1 << 63, size=num_hashes, dtype=np.uint64)
        self.num_hashes = num_hashes

    def signature(self, shingles: set[tuple[str, ...]]) -> np.ndarray | None:
        if not shingles:
            return None
        hashes = _shingle_hashes(shingles)
        mixed = _mix64(self.salts[:, None] ^ hashes[None, :])
        return mixed.min(axis=1)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def near_dedup(corpus: Corpus, config: FilterConfig) -> tuple[Corpus, DedupReport]:
    """Near-duplicate removal: MinHash/LSH proposes candidate pairs, exact Jaccard verifies.

    A pair is a duplicate iff its exact shingle Jaccard reaches the configured
    threshold; duplicates are grouped with union-find and the earliest document
    in corpus order survives each group. Deterministic for the configured seed.
    """
    cfg = config.near_dup
    cfg.validate()
    hasher = MinHasher(cfg.num_hashes, cfg.seed)

    order = {doc.id: i for i, doc in enumerate(corpus)}
    shingle_sets: dict[str, set[tuple[str, ...]]] = {}
    buckets: list[dict[tuple, list[str]]] = [{} for _ in range(cfg.bands)]
    candidates: set[tuple[str, str]] = set()
    for doc in corpus:
        shingles = _shingles(doc.text, cfg.shingle_n)
        shingle_sets[doc.id] = shingles
        sig = hasher.signature(shingles)
        if sig is None:  # shorter than one shingle: can never match
            continue
        for band in range(cfg.bands):
            key = tuple(int(v) for v in sig[band * cfg.rows:(band + 1) * cfg.rows])
            bucket = buckets[band].setdefault(key, [])
            for other_id in bucket:
                pair = tuple(sorted((other_id, doc.id), key=order.__getitem__))
                candidates.add(pair)  # type: ignore[arg-type]
            bucket.append(doc.id)

    uf = _UnionFind()
    verified: list[tuple[str, str, float]] = []
    for id_a, id_b in sorted(candidates, key=lambda p: (order[p[0]], order[p[1]])):
        sa, sb = shingle_sets[id_a], shingle_sets[id_b]
        union_size = len(sa | sb)
        jaccard = len(sa & sb) / union_size if union_size else 0.0
        if jaccard >= cfg.jaccard_threshold:
            verified.append((id_a, id_b, jaccard))
            uf.union(id_a, id_b)

    groups: dict[str, list[str]] = {}
    for doc in corpus:
        if doc.id in uf.parent:
            groups.setdefault(uf.find(doc.id), []).append(doc.id)

    removed: set[str] = set()
    clusters: list[tuple[str, list[str]]] = []
    for members in groups.values():
        if len(members) < 2:
            continue
        members.sort(key=order.__getitem__)
        clusters.append((members[0], members[1:]))
        removed.update(members[1:])

    survivors = Corpus(doc for doc in corpus if doc.id not in removed)
    clusters.sort(key=lambda c: order[c[0]])
    report = DedupReport(
        mode="near",
        removed_ids=sorted(removed, key=order.__getitem__),
        clusters=clusters,
        seed=cfg.seed,
        pairs=verified,
    )
    return survivors, report


def save_reports(reports: list[DedupReport], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_dict(), ensure_ascii=False) + "\n")


def filter_config_from_dict(data: dict) -> FilterConfig:
    thresholds = DEFAULT_REPETITION_THRESHOLDS
    if "repetition_thresholds" in data:
        raw = data["repetition_thresholds"]
        thresholds = replace(
            DEFAULT_REPETITION_THRESHOLDS,
            **{k: raw[k] for k in ("dup_line_frac", "dup_para_frac",
                                   "dup_line_char_frac", "dup_para_char_frac") if k in raw},
        )
        if "top_ngram_char_frac" in raw:
            thresholds = replace(thresholds, top_ngram_char_frac={
                int(k): float(v) for k, v in raw["top_ngram_char_frac"].items()})
        if "dup_ngram_char_frac" in raw:
            thresholds = replace(thresholds, dup_ngram_char_frac={
                int(k): float(v) for k, v in raw["dup_ngram_char_frac"].items()})
    try:
        near = NearDupConfig(**data.get("near_dup", {}))
        config = FilterConfig(
            min_words=int(data.get("min_words", 50)),
            max_words=int(data.get("max_words", 100_000)),
            repetition_thresholds=thresholds,
            near_dup=near,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad filter config: {exc}") from exc
    config.validate()
    return config
