"""Multilingual tokenization and normalization of article text.

Turns raw article bodies into ordered token streams. The rules are
deliberately simple and deterministic: whitespace split, edge-punctuation
strip (interior hyphens and apostrophes survive, so "covid-19" stays one
token), casefold, then drop stopwords, short tokens, and digit-only
tokens. No stemming by default; displayed vocabularies are surface forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from typing import Iterable, Sequence

from .corpus import Article
from .errors import ConfigurationError

BUNDLED_STOPWORD_LANGUAGES = ("en", "it")

_EDGE_PUNCT = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)
_DIGITS_ONLY = re.compile(r"\d+$")


@dataclass(frozen=True)
class PreprocessConfig:
    """Tokenization settings for one corpus slice (immutable)."""

    language: str = "en"
    lowercase: bool = True
    strip_punctuation: bool = True
    strip_digits: bool = True
    min_token_len: int = 2
    stopwords: frozenset[str] = field(default_factory=frozenset)
    extra_stopwords: frozenset[str] = field(default_factory=frozenset)
    stem: bool = False  # off by default; surface forms match displayed vocabularies

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ConfigurationError("min_token_len must be >= 1")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "extra_stopwords", frozenset(self.extra_stopwords))

    @property
    def all_stopwords(self) -> frozenset[str]:
        return self.stopwords | self.extra_stopwords

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "lowercase": self.lowercase,
            "strip_punctuation": self.strip_punctuation,
            "strip_digits": self.strip_digits,
            "min_token_len": self.min_token_len,
            "stopwords": sorted(self.stopwords),
            "extra_stopwords": sorted(self.extra_stopwords),
            "stem": self.stem,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PreprocessConfig":
        return cls(
            language=raw.get("language", "en"),
            lowercase=raw.get("lowercase", True),
            strip_punctuation=raw.get("strip_punctuation", True),
            strip_digits=raw.get("strip_digits", True),
            min_token_len=raw.get("min_token_len", 2),
            stopwords=frozenset(raw.get("stopwords", ())),
            extra_stopwords=frozenset(raw.get("extra_stopwords", ())),
            stem=raw.get("stem", False),
        )


@dataclass(frozen=True)
class TokenizedDoc:
    """One article reduced to its normalized token stream."""

    article_id: str
    tokens: tuple[str, ...]
    published_at: date
    language: str


def load_stopwords(language: str, path: str | None = None) -> frozenset[str]:
    """Load a stopword set for `language`, bundled or from a user file.

    File format: UTF-8, one term per line, `#` starts a comment line.
    Raises ConfigurationError when the language has no bundled list and
    no file was given.
    """
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    elif language in BUNDLED_STOPWORD_LANGUAGES:
        ref = resources.files("cometa.resources.stopwords") / f"{language}.txt"
        text = ref.read_text(encoding="utf-8")
    else:
        raise ConfigurationError(
            f"no bundled stopword list for language '{language}'; supply a file"
        )
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    if not words:
        raise ConfigurationError(f"stopword list for '{language}' is empty")
    return frozenset(words)


def tokenize(text: str, config: PreprocessConfig) -> list[str]:
    """Split `text` into normalized tokens, preserving original order.

    Tokens failing any config filter (length, stopword, digits-only,
    punctuation-only) are dropped. Empty output is legal.
    """
    stopwords = config.all_stopwords
    min_len = config.min_token_len
    out = []
    for raw in text.split():
        token = raw
        if config.strip_punctuation:
            token = _EDGE_PUNCT.sub("", token)
            if not token:
                continue
        if config.lowercase:
            token = token.lower()
        if len(token) < min_len:
            continue
        if config.strip_digits and _DIGITS_ONLY.fullmatch(token):
            continue
        if token in stopwords:
            continue
        if config.stem:
            token = _light_stem(token, config.language)
        out.append(token)
    return out


def preprocess_corpus(
    articles: Iterable[Article], config: PreprocessConfig
) -> list[TokenizedDoc]:
    """Tokenize every article (title prepended to body; headlines carry signal).

    All articles must match config.language; a mismatch raises
    ConfigurationError naming the offending article id. Documents that
    tokenize to nothing are kept with empty token tuples.
    """
    docs = []
    for article in articles:
        if article.language != config.language:
            raise ConfigurationError(
                f"article '{article.id}' has language '{article.language}', "
                f"config expects '{config.language}'"
            )
        text = f"{article.title}\n{article.body}" if article.title else article.body
        docs.append(
            TokenizedDoc(
                article_id=article.id,
                tokens=tuple(tokenize(text, config)),
                published_at=article.published_at,
                language=article.language,
            )
        )
    return docs


def _light_stem(token: str, language: str) -> str:
    """Crude suffix stripping, only applied when config.stem is on."""
    if language == "en":
        for suffix in ("ing", "edly", "ies", "es", "ed", "s"):
            if token.endswith(suffix) and len(token) - len(suffix) >= 3:
                return token[: -len(suffix)]
    return token
