"""Dictionary-based polarity scoring and the publication-date time series.

A document's score is the plain sum of lexicon polarities over its
matched tokens (no length normalization, no negation handling); the
daily aggregate is the mean of document scores. Peaks are detected on
the absolute mean so both positive and negative swings register.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date
from importlib import resources
from typing import Iterable, Sequence

from .errors import ConfigurationError
from .preprocess import TokenizedDoc

logger = logging.getLogger(__name__)

BUNDLED_LEXICON_LANGUAGES = ("en", "it")
POLARITY_MIN, POLARITY_MAX = -5, 5


@dataclass(frozen=True)
class Lexicon:
    """Normalized term -> integer polarity in [-5, +5]."""

    language: str
    entries: dict[str, int]

    def __post_init__(self):
        if not self.entries:
            raise ConfigurationError("lexicon has no entries")


@dataclass(frozen=True)
class SentimentPoint:
    day: date
    mean_polarity: float
    doc_count: int
    total_polarity: float


@dataclass(frozen=True)
class SentimentSeries:
    points: tuple[SentimentPoint, ...]

    def __len__(self) -> int:
        return len(self.points)


def _parse_lexicon_lines(lines: Iterable[str], language: str) -> Lexicon:
    entries: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            logger.warning("lexicon line %d malformed, skipped: %r", lineno, raw)
            continue
        term, value = parts[0].strip(), parts[1].strip()
        try:
            polarity = int(value)
        except ValueError:
            logger.warning("lexicon line %d has non-integer polarity, skipped", lineno)
            continue
        if not (POLARITY_MIN <= polarity <= POLARITY_MAX):
            logger.warning(
                "lexicon line %d polarity %d out of [-5, 5], skipped", lineno, polarity
            )
            continue
        if term in entries:
            logger.warning("lexicon term %r repeated; last value wins", term)
        entries[term] = polarity
    if not entries:
        raise ConfigurationError("lexicon file yielded no valid entries")
    return Lexicon(language=language, entries=entries)


def load_lexicon(path: str, language: str) -> Lexicon:
    """Read a `term<TAB>integer` lexicon file; duplicates keep the last value."""
    try:
        with open(path, encoding="utf-8") as fh:
            return _parse_lexicon_lines(fh, language)
    except OSError as exc:
        raise ConfigurationError(f"cannot read lexicon {path}: {exc}")


def bundled_lexicon(language: str) -> Lexicon:
    """The default valence list shipped for `language` (en, it)."""
    if language not in BUNDLED_LEXICON_LANGUAGES:
        raise ConfigurationError(f"no bundled lexicon for language '{language}'")
    ref = resources.files("cometa.resources.lexicons") / f"{language}.tsv"
    return _parse_lexicon_lines(
        ref.read_text(encoding="utf-8").splitlines(), language
    )


def score_document(tokens: Sequence[str], lexicon: Lexicon) -> tuple[int, int]:
    """Sum polarities over lexicon hits; returns (score, matched token count)."""
    entries = lexicon.entries
    score = 0
    matched = 0
    for token in tokens:
        polarity = entries.get(token)
        if polarity is not None:
            score += polarity
            matched += 1
    return score, matched


def sentiment_series(
    docs: Iterable[TokenizedDoc], lexicon: Lexicon
) -> SentimentSeries:
    """Aggregate document scores into one point per publication day.

    Days with no documents are omitted; each emitted point is the mean of
    that day's document scores (documents weigh equally regardless of length).
    """
    by_day: dict[date, list[int]] = {}
    for doc in docs:
        score, _ = score_document(doc.tokens, lexicon)
        by_day.setdefault(doc.published_at, []).append(score)
    points = []
    for day in sorted(by_day):
        scores = by_day[day]
        total = float(sum(scores))
        points.append(
            SentimentPoint(
                day=day,
                mean_polarity=total / len(scores),
                doc_count=len(scores),
                total_polarity=total,
            )
        )
    return SentimentSeries(points=tuple(points))


def find_peaks(
    series: SentimentSeries, window: int = 3, min_prominence: float = 0.0
) -> list[date]:
    """Dates where |mean polarity| spikes above its neighborhood.

    A point is a peak when it is interior (not first or last), its
    absolute mean strictly exceeds every other point within `window`
    positions, and it exceeds the series-wide average absolute mean by at
    least `min_prominence`.
    """
    if window < 1:
        raise ConfigurationError("window must be >= 1")
    if min_prominence < 0:
        raise ConfigurationError("min_prominence must be >= 0")
    n = len(series.points)
    if n < 3:
        return []
    magnitude = [abs(p.mean_polarity) for p in series.points]
    baseline = sum(magnitude) / n
    peaks = []
    for i in range(1, n - 1):
        lo = max(0, i - window)
        hi = min(n, i + window + 1)
        neighborhood = magnitude[lo:i] + magnitude[i + 1 : hi]
        if all(magnitude[i] > m for m in neighborhood) and (
            magnitude[i] - baseline >= min_prominence
        ):
            peaks.append(series.points[i].day)
    return peaks
