"""Article corpus persistence: the system's single source of document truth.

Storage is an append-only JSON-lines file per corpus (crash-safe,
diff-friendly, no database) plus an index rebuilt by scanning. Writers
take a per-corpus exclusive lock; readers never block. Records are
immutable once accepted and duplicate ids resolve first-write-wins, so
ingestion reruns are idempotent.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ConfigurationError, CorpusLockedError, NotFoundError

DEFAULT_LANGUAGES = frozenset({"en", "it"})
MIN_DATE = date(1900, 1, 1)

_CORPUS_ID_RE = re.compile(r"[A-Za-z0-9._-]+$")
_FIELDS = ("id", "source", "language", "published_at", "title", "body")


@dataclass(frozen=True, order=True)
class Article:
    """One news document with source, language, publication date, and text."""

    id: str
    source: str
    language: str
    published_at: date
    title: str
    body: str

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "language": self.language,
            "published_at": self.published_at.isoformat(),
            "title": self.title,
            "body": self.body,
        }

    def to_line(self) -> str:
        """Canonical normalized JSON line (sorted keys, compact separators)."""
        return json.dumps(
            self.to_record(), ensure_ascii=False, sort_keys=True, separators=(",", ":")
        )


@dataclass(frozen=True)
class CorpusView:
    """Immutable snapshot of a corpus slice: ids sorted by (published_at, id)."""

    corpus_id: str
    sources: frozenset[str]
    languages: frozenset[str]
    date_from: date | None
    date_to: date | None
    article_ids: tuple[str, ...]

    def filter_dict(self) -> dict:
        return {
            "sources": sorted(self.sources),
            "languages": sorted(self.languages),
            "date_from": self.date_from.isoformat() if self.date_from else None,
            "date_to": self.date_to.isoformat() if self.date_to else None,
        }


@dataclass(frozen=True)
class CorpusStats:
    total: int
    by_language: dict[str, int]
    by_source: dict[str, int]
    date_range: tuple[date, date] | None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "by_language": dict(sorted(self.by_language.items())),
            "by_source": dict(sorted(self.by_source.items())),
            "date_range": [d.isoformat() for d in self.date_range]
            if self.date_range
            else None,
        }


@dataclass(frozen=True)
class RejectedRecord:
    index: int
    article_id: str | None
    reason: str


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    rejected: int
    reasons: tuple[RejectedRecord, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": self.rejected,
            "reasons": [
                {"index": r.index, "id": r.article_id, "reason": r.reason}
                for r in self.reasons
            ],
        }


def parse_article(
    record: dict | str, languages: frozenset[str] = DEFAULT_LANGUAGES
) -> Article:
    """Validate one raw record; raises ValueError with a short reason on failure."""
    if isinstance(record, str):
        try:
            record = json.loads(record)
        except json.JSONDecodeError:
            raise ValueError("bad json")
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    for name in _FIELDS:
        if name not in record:
            raise ValueError(f"missing field: {name}")
    article_id = record["id"]
    if not isinstance(article_id, str) or not article_id:
        raise ValueError("empty id")
    source = record["source"]
    if not isinstance(source, str) or not source:
        raise ValueError("empty source")
    language = record["language"]
    if language not in languages:
        raise ValueError(f"unknown language: {language!r}")
    raw_date = record["published_at"]
    if not isinstance(raw_date, str):
        raise ValueError("bad date")
    try:
        # day resolution: tolerate a timestamp suffix, keep the date part
        published = date.fromisoformat(raw_date.split("T")[0])
    except ValueError:
        raise ValueError("bad date")
    if not (MIN_DATE <= published <= date.today() + timedelta(days=1)):
        raise ValueError("date out of range")
    title = record["title"] if isinstance(record["title"], str) else None
    body = record["body"] if isinstance(record["body"], str) else None
    if title is None or body is None:
        raise ValueError("title and body must be strings")
    if not body and not title:
        raise ValueError("empty body and title")
    return Article(
        id=article_id,
        source=source,
        language=language,
        published_at=published,
        title=title,
        body=body,
    )


class CorpusStore:
    """File-backed store of article corpora under one root directory."""

    def __init__(self, root: str | Path, languages: Iterable[str] = DEFAULT_LANGUAGES):
        self.root = Path(root)
        self.languages = frozenset(languages)
        (self.root / "corpora").mkdir(parents=True, exist_ok=True)

    # -- paths -------------------------------------------------------------

    def _corpus_dir(self, corpus_id: str, create: bool = False) -> Path:
        if not _CORPUS_ID_RE.fullmatch(corpus_id):
            raise ConfigurationError(f"invalid corpus id: {corpus_id!r}")
        d = self.root / "corpora" / corpus_id
        if create:
            d.mkdir(parents=True, exist_ok=True)
        elif not (d / "articles.jsonl").exists():
            raise NotFoundError(f"unknown corpus: {corpus_id}")
        return d

    def _articles_path(self, corpus_id: str, create: bool = False) -> Path:
        return self._corpus_dir(corpus_id, create=create) / "articles.jsonl"

    @contextmanager
    def _write_lock(self, corpus_id: str):
        lock_path = self._corpus_dir(corpus_id, create=True) / ".lock"
        fh = open(lock_path, "a+")
        try:
            try:
                fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except OSError:
                raise CorpusLockedError(
                    f"corpus '{corpus_id}' is locked by another writer; retry"
                )
            yield
        finally:
            fh.close()  # releases the flock

    # -- reads -------------------------------------------------------------

    def list_corpora(self) -> list[str]:
        base = self.root / "corpora"
        return sorted(
            p.name for p in base.iterdir() if (p / "articles.jsonl").exists()
        )

    def _scan(self, corpus_id: str) -> list[Article]:
        """Rebuild the in-memory index by scanning the append-only file."""
        path = self._articles_path(corpus_id)
        articles = []
        seen = set()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                if record["id"] in seen:  # first-write-wins
                    continue
                seen.add(record["id"])
                articles.append(
                    Article(
                        id=record["id"],
                        source=record["source"],
                        language=record["language"],
                        published_at=date.fromisoformat(record["published_at"]),
                        title=record["title"],
                        body=record["body"],
                    )
                )
        return articles

    def article_ids(self, corpus_id: str) -> set[str]:
        return {a.id for a in self._scan(corpus_id)}

    # -- operations --------------------------------------------------------

    def ingest_documents(
        self, records: Sequence[dict | str], corpus_id: str
    ) -> IngestReport:
        """Validate and append records; rejects are reported, never fatal.

        Accepted articles are persisted in one atomic append under the
        corpus write lock. Duplicate ids (against the store or earlier in
        the batch) are rejected, first occurrence kept.
        """
        with self._write_lock(corpus_id):
            path = self._articles_path(corpus_id, create=True)
            path.touch(exist_ok=True)  # an empty corpus is still a corpus
            existing = {a.id for a in self._scan(corpus_id)}
            accepted: list[Article] = []
            reasons: list[RejectedRecord] = []
            batch_ids: set[str] = set()
            for index, raw in enumerate(records):
                try:
                    article = parse_article(raw, self.languages)
                except ValueError as exc:
                    rid = None
                    if isinstance(raw, dict):
                        rid = raw.get("id") if isinstance(raw.get("id"), str) else None
                    reasons.append(RejectedRecord(index, rid, str(exc)))
                    continue
                if article.id in existing or article.id in batch_ids:
                    reasons.append(
                        RejectedRecord(index, article.id, "duplicate id")
                    )
                    continue
                batch_ids.add(article.id)
                accepted.append(article)
            if accepted:
                blob = "".join(a.to_line() + "\n" for a in accepted)
                with open(path, "a", encoding="utf-8") as fh:
                    fh.write(blob)
                    fh.flush()
                    os.fsync(fh.fileno())
            return IngestReport(
                accepted=len(accepted), rejected=len(reasons), reasons=tuple(reasons)
            )

    def filter_corpus(
        self,
        corpus_id: str,
        sources: Iterable[str] = (),
        languages: Iterable[str] = (),
        dates: tuple[date | None, date | None] = (None, None),
    ) -> CorpusView:
        """Slice a corpus; an empty facet places no constraint. Dates inclusive."""
        sources = frozenset(sources)
        languages = frozenset(languages)
        date_from, date_to = dates
        matched = []
        for a in self._scan(corpus_id):
            if sources and a.source not in sources:
                continue
            if languages and a.language not in languages:
                continue
            if date_from is not None and a.published_at < date_from:
                continue
            if date_to is not None and a.published_at > date_to:
                continue
            matched.append(a)
        matched.sort(key=lambda a: (a.published_at, a.id))
        return CorpusView(
            corpus_id=corpus_id,
            sources=sources,
            languages=languages,
            date_from=date_from,
            date_to=date_to,
            article_ids=tuple(a.id for a in matched),
        )

    def corpus_stats(self, corpus_id: str) -> CorpusStats:
        articles = self._scan(corpus_id)
        by_language: dict[str, int] = {}
        by_source: dict[str, int] = {}
        dates = []
        for a in articles:
            by_language[a.language] = by_language.get(a.language, 0) + 1
            by_source[a.source] = by_source.get(a.source, 0) + 1
            dates.append(a.published_at)
        return CorpusStats(
            total=len(articles),
            by_language=by_language,
            by_source=by_source,
            date_range=(min(dates), max(dates)) if dates else None,
        )

    def resolve(self, view: CorpusView) -> list[Article]:
        """Materialize a view's articles in view order; every id must resolve."""
        index = {a.id: a for a in self._scan(view.corpus_id)}
        missing = [i for i in view.article_ids if i not in index]
        if missing:
            raise NotFoundError(f"view references unknown article ids: {missing[:3]}")
        return [index[i] for i in view.article_ids]

    def export_corpus(self, corpus_id: str) -> Iterator[str]:
        """Yield normalized JSON lines ordered by (published_at, id)."""
        articles = sorted(
            self._scan(corpus_id), key=lambda a: (a.published_at, a.id)
        )
        for a in articles:
            yield a.to_line()

    def fingerprint(self, corpus_id: str) -> str:
        """Content hash of the corpus file; keys analysis bundles."""
        path = self._articles_path(corpus_id)
        digest = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 16), b""):
                digest.update(chunk)
        return digest.hexdigest()
