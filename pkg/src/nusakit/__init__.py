"""nusakit: corpus curation, tokenizer vocabulary expansion, and evaluation.

The toolkit covers the non-training stages of adapting a language model to
Indonesian and its regional languages: corpus quality filtering and
deduplication, word-based tokenizer vocabulary expansion with fertility
analytics, embedding-matrix extension and PCA export, alternate-parallel
bilingual data construction, and a ten-task evaluation harness.
"""

from .corpus import Corpus, CorpusStats, Document, corpus_stats, load_corpus, save_corpus, split_sentences
from .errors import ConfigError, DataError, JudgeError, NusakitError, TranslationError
from .languages import ALL_LANGUAGES, REGIONAL_LANGUAGES, LanguageTag

__version__ = "0.1.0"

__all__ = [
    "ALL_LANGUAGES",
    "REGIONAL_LANGUAGES",
    "ConfigError",
    "Corpus",
    "CorpusStats",
    "DataError",
    "Document",
    "JudgeError",
    "LanguageTag",
    "NusakitError",
    "TranslationError",
    "corpus_stats",
    "load_corpus",
    "save_corpus",
    "split_sentences",
    "__version__",
]
