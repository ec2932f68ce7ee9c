"""Language tags for the thirteen supported languages plus an escape hatch.

Tags are small immutable values used as dictionary keys throughout the
toolkit. Parsing never fails: unknown codes become ``other`` tags that
remember their original label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

KNOWN_CODES: tuple[str, ...] = (
    "english",
    "indonesian",
    "acehnese",
    "balinese",
    "banjarese",
    "buginese",
    "dayak_ngaju",
    "javanese",
    "lampungnese",
    "madurese",
    "minangkabau",
    "sundanese",
    "toba_batak",
)


@dataclass(frozen=True, order=True)
class LanguageTag:
    code: str
    label: str = field(default="", compare=True)

    def __post_init__(self) -> None:
        if self.code != "other" and self.code not in KNOWN_CODES:
            raise ValueError(f"unknown language code {self.code!r}; use LanguageTag.parse")
        if self.code != "other" and self.label:
            raise ValueError("label is only meaningful for 'other' tags")

    @classmethod
    def parse(cls, raw: str) -> "LanguageTag":
        """Parse a language code; unknown codes yield an ``other`` tag, never an error."""
        normalized = raw.strip().lower().replace("-", "_").replace(" ", "_")
        if normalized in KNOWN_CODES:
            return cls(normalized)
        return cls("other", raw.strip())

    @property
    def is_regional(self) -> bool:
        return self.code not in ("english", "indonesian", "other")

    def __str__(self) -> str:
        if self.code == "other" and self.label:
            return self.label
        return self.code


ENGLISH = LanguageTag("english")
INDONESIAN = LanguageTag("indonesian")
ACEHNESE = LanguageTag("acehnese")
BALINESE = LanguageTag("balinese")
BANJARESE = LanguageTag("banjarese")
BUGINESE = LanguageTag("buginese")
DAYAK_NGAJU = LanguageTag("dayak_ngaju")
JAVANESE = LanguageTag("javanese")
LAMPUNGNESE = LanguageTag("lampungnese")
MADURESE = LanguageTag("madurese")
MINANGKABAU = LanguageTag("minangkabau")
SUNDANESE = LanguageTag("sundanese")
TOBA_BATAK = LanguageTag("toba_batak")

ALL_LANGUAGES: tuple[LanguageTag, ...] = tuple(LanguageTag(c) for c in KNOWN_CODES)
REGIONAL_LANGUAGES: tuple[LanguageTag, ...] = tuple(t for t in ALL_LANGUAGES if t.is_regional)
