"""End-to-end analysis pipeline: one reproducible job from corpus to bundle.

A run is addressed by the hash of (canonical config JSON, corpus content
fingerprint); rerunning an identical job returns the cached bundle
byte-for-byte. Bundles are directories of the module export formats plus
a manifest, written atomically (temp dir, then rename) so a failed run
never leaves a partial bundle. Wall-clock metadata lives in a sidecar
file excluded from the deterministic payload.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import shutil
import time
import uuid
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Callable

from . import coocnet, dtm, graphio, sentiment, topicmodel, topicnet
from .corpus import CorpusStats, CorpusStore
from .errors import ConfigurationError, NotFoundError, StageError
from .preprocess import PreprocessConfig, load_stopwords, preprocess_corpus
from .topicmodel import LdaConfig

BUNDLE_FORMAT = "cometa.bundle"
BUNDLE_VERSION = 1
RUN_INFO_FILE = "run_info.json"

PEAK_WINDOW = 3
PEAK_MIN_PROMINENCE = 0.0

SECTION_NAMES = ("topterms", "sentiment", "coocnet", "topics", "topicnet")

STAGES = (
    "corpus_store",
    "preprocess",
    "dtm",
    "sentiment",
    "coocnet",
    "topicmodel",
    "topicnet",
    "persist",
)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one analysis run depends on, serializable and hashable."""

    corpus_id: str
    preprocess: PreprocessConfig
    lda: LdaConfig
    sources: frozenset[str] = frozenset()
    languages: frozenset[str] = frozenset()
    date_from: date | None = None
    date_to: date | None = None
    max_sparsity: float = 0.99
    lexicon_path: str | None = None
    cooc_mode: str = "binary"
    cooc_min_weight: int = 2
    top_n: int = 20

    def __post_init__(self):
        if not (0.0 < self.max_sparsity <= 1.0):
            raise ConfigurationError("max_sparsity must be in (0, 1]")
        if self.top_n < 1:
            raise ConfigurationError("top_n must be >= 1")
        if self.cooc_min_weight < 1:
            raise ConfigurationError("cooc_min_weight must be >= 1")
        if self.cooc_mode not in ("binary", "count"):
            raise ConfigurationError(f"unknown cooc_mode: {self.cooc_mode!r}")
        object.__setattr__(self, "sources", frozenset(self.sources))
        object.__setattr__(self, "languages", frozenset(self.languages))

    @property
    def effective_languages(self) -> frozenset[str]:
        """Empty language facet defaults to the preprocess language."""
        return self.languages or frozenset({self.preprocess.language})

    def to_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "sources": sorted(self.sources),
            "languages": sorted(self.languages),
            "date_from": self.date_from.isoformat() if self.date_from else None,
            "date_to": self.date_to.isoformat() if self.date_to else None,
            "preprocess": self.preprocess.to_dict(),
            "max_sparsity": self.max_sparsity,
            "lexicon_path": self.lexicon_path,
            "cooc_mode": self.cooc_mode,
            "cooc_min_weight": self.cooc_min_weight,
            "lda": self.lda.to_dict(),
            "top_n": self.top_n,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        if "corpus_id" not in raw:
            raise ConfigurationError("config must name corpus_id")
        preprocess_raw = dict(raw.get("preprocess", {}))
        if "stopwords" not in preprocess_raw:
            # no explicit list: fall back to the bundled one when it exists
            language = preprocess_raw.get("language", "en")
            try:
                preprocess_raw["stopwords"] = sorted(load_stopwords(language))
            except ConfigurationError:
                preprocess_raw["stopwords"] = []
        if "lda" not in raw:
            raise ConfigurationError("config must carry an lda section")
        return cls(
            corpus_id=raw["corpus_id"],
            sources=frozenset(raw.get("sources", ())),
            languages=frozenset(raw.get("languages", ())),
            date_from=date.fromisoformat(raw["date_from"])
            if raw.get("date_from")
            else None,
            date_to=date.fromisoformat(raw["date_to"]) if raw.get("date_to") else None,
            preprocess=PreprocessConfig.from_dict(preprocess_raw),
            max_sparsity=raw.get("max_sparsity", 0.99),
            lexicon_path=raw.get("lexicon_path"),
            cooc_mode=raw.get("cooc_mode", "binary"),
            cooc_min_weight=raw.get("cooc_min_weight", 2),
            lda=LdaConfig.from_dict(raw["lda"]),
            top_n=raw.get("top_n", 20),
        )

    def canonical_json(self) -> str:
        return json.dumps(
            self.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")
        )

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AnalysisBundle:
    """One finished run: section data plus its content-addressed location."""

    key: str
    config_hash: str
    corpus_fingerprint: str
    config: PipelineConfig
    stats: CorpusStats
    top_terms: list[dtm.TermFrequency]
    sentiment_series: sentiment.SentimentSeries
    peaks: list[date]
    cooc_graph: coocnet.CoocGraph
    cooc_table: coocnet.CentralityTable
    ttm: topicmodel.TermTopicMatrix
    bipartite_graph: topicnet.BipartiteGraph
    bipartite_table: topicnet.BipartiteCentrality
    bridges: list[topicnet.BridgeTerm]
    path: Path


class BundleStore:
    """Content-addressed bundle directories under one root."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, key: str) -> Path:
        return self.root / key

    def exists(self, key: str) -> bool:
        return (self.path_for(key) / "manifest.json").exists()

    def keys(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir() if (p / "manifest.json").exists()
        )


def bundle_key(config: PipelineConfig, corpus_fingerprint: str) -> str:
    payload = config.canonical_json() + "\n" + corpus_fingerprint
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def run_pipeline(
    config: PipelineConfig,
    store: CorpusStore,
    bundles: BundleStore,
    on_stage: Callable[[str], None] | None = None,
) -> AnalysisBundle:
    """Execute all stages over one immutable corpus snapshot.

    Returns the cached bundle untouched when one exists for this
    (config, corpus) pair. Any stage failure raises StageError naming the
    stage; nothing is persisted on failure.
    """

    def stage(name: str):
        if on_stage is not None:
            on_stage(name)

    timings: dict[str, float] = {}

    def timed(name, fn):
        stage(name)
        started = time.perf_counter()
        try:
            result = fn()
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc
        timings[name] = time.perf_counter() - started
        return result

    # snapshot + cache probe
    def load_corpus():
        fingerprint = store.fingerprint(config.corpus_id)
        view = store.filter_corpus(
            config.corpus_id,
            sources=config.sources,
            languages=config.effective_languages,
            dates=(config.date_from, config.date_to),
        )
        articles = store.resolve(view)
        return fingerprint, view, articles

    fingerprint, view, articles = timed("corpus_store", load_corpus)
    key = bundle_key(config, fingerprint)
    if bundles.exists(key):
        return load_bundle(bundles.path_for(key))

    stats = _stats_of(articles)

    docs = timed(
        "preprocess", lambda: preprocess_corpus(articles, config.preprocess)
    )

    def build_matrix():
        full = dtm.build_dtm(docs)
        trimmed = dtm.trim_sparse(full, config.max_sparsity)
        return trimmed, dtm.top_terms(trimmed, config.top_n)

    matrix, top = timed("dtm", build_matrix)

    def run_sentiment():
        if config.lexicon_path:
            lexicon = sentiment.load_lexicon(
                config.lexicon_path, config.preprocess.language
            )
        else:
            lexicon = sentiment.bundled_lexicon(config.preprocess.language)
        series = sentiment.sentiment_series(docs, lexicon)
        peaks = sentiment.find_peaks(series, PEAK_WINDOW, PEAK_MIN_PROMINENCE)
        return series, peaks

    series, peaks = timed("sentiment", run_sentiment)

    def run_cooc():
        graph = coocnet.cooccurrence(
            matrix, mode=config.cooc_mode, min_weight=config.cooc_min_weight
        )
        return graph, coocnet.compute_centrality(graph)

    cooc_graph, cooc_table = timed("coocnet", run_cooc)

    model = timed("topicmodel", lambda: topicmodel.fit_lda(matrix, config.lda))

    def run_topicnet():
        ttm = topicmodel.top_terms_per_topic(model, config.top_n)
        graph = topicnet.build_bipartite(ttm)
        return (
            ttm,
            graph,
            topicnet.compute_bipartite_centrality(graph),
            topicnet.bridge_terms(graph, min_topics=2),
        )

    ttm, bip_graph, bip_table, bridges = timed("topicnet", run_topicnet)

    bundle = AnalysisBundle(
        key=key,
        config_hash=config.config_hash(),
        corpus_fingerprint=fingerprint,
        config=config,
        stats=stats,
        top_terms=top,
        sentiment_series=series,
        peaks=peaks,
        cooc_graph=cooc_graph,
        cooc_table=cooc_table,
        ttm=ttm,
        bipartite_graph=bip_graph,
        bipartite_table=bip_table,
        bridges=bridges,
        path=bundles.path_for(key),
    )

    def persist():
        _write_bundle(bundle, bundles, model, timings)
        return bundle.path

    timed("persist", persist)
    return bundle


def _stats_of(articles) -> CorpusStats:
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


# -- serialization -----------------------------------------------------------


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _canonical_json_text(payload) -> str:
    return (
        json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        + "\n"
    )


def _bundle_files(bundle: AnalysisBundle, model: topicmodel.LdaModel) -> dict[str, str]:
    """All deterministic bundle files as name -> text."""
    files: dict[str, str] = {}
    files["config.json"] = bundle.config.canonical_json() + "\n"
    files["stats.json"] = _canonical_json_text(bundle.stats.to_dict())
    files["top_terms.csv"] = _csv_text(
        ["term", "total_count", "doc_count"],
        [[f.term, f.total_count, f.doc_count] for f in bundle.top_terms],
    )
    files["sentiment.csv"] = _csv_text(
        ["date", "mean", "docs", "total"],
        [
            [p.day.isoformat(), p.mean_polarity, p.doc_count, p.total_polarity]
            for p in bundle.sentiment_series.points
        ],
    )
    files["sentiment_peaks.json"] = _canonical_json_text(
        {
            "window": PEAK_WINDOW,
            "min_prominence": PEAK_MIN_PROMINENCE,
            "peaks": [d.isoformat() for d in bundle.peaks],
        }
    )
    files["cooc_edges.csv"] = graphio.render_edge_list(bundle.cooc_graph.edges)
    files["cooc_centrality.csv"] = graphio.render_centrality_csv(
        [(r.node, r.degree, r.closeness) for r in bundle.cooc_table.rows]
    )
    files["cooc.graphml"] = graphio.render_graphml(
        bundle.cooc_graph.nodes,
        bundle.cooc_graph.edges,
        {
            r.node: {"degree": r.degree, "closeness": r.closeness}
            for r in bundle.cooc_table.rows
        },
    )
    ttm_rows = sorted(
        (
            (topicnet.topic_label(k), term, weight)
            for (term, k), weight in bundle.ttm.weight.items()
        ),
        key=lambda row: (row[0], -row[2], row[1]),
    )
    files["term_topic.csv"] = _csv_text(
        ["topic", "term", "weight"], [list(r) for r in ttm_rows]
    )
    bip_edges = topicnet.export_edges(bundle.bipartite_graph)
    files["topicnet_edges.csv"] = graphio.render_edge_list(bip_edges)
    files["topicnet_centrality.csv"] = graphio.render_centrality_csv(
        [
            (r.node, r.mode, r.degree, r.closeness)
            for r in bundle.bipartite_table.rows
        ],
        header=("node", "mode", "degree", "closeness"),
    )
    files["topicnet.graphml"] = graphio.render_graphml(
        topicnet.export_nodes(bundle.bipartite_graph),
        bip_edges,
        {
            r.node: {"mode": r.mode, "degree": r.degree, "closeness": r.closeness}
            for r in bundle.bipartite_table.rows
        },
    )
    files["bridges.json"] = _canonical_json_text(
        [
            {
                "term": b.term,
                "topics": [topicnet.topic_label(k) for k in sorted(b.topics)],
            }
            for b in bundle.bridges
        ]
    )
    files["model.json"] = topicmodel.model_to_bytes(model).decode("utf-8") + "\n"
    return files


def _write_bundle(
    bundle: AnalysisBundle,
    bundles: BundleStore,
    model: topicmodel.LdaModel,
    timings: dict[str, float],
) -> None:
    files = _bundle_files(bundle, model)
    hashes = {
        name: hashlib.sha256(text.encode("utf-8")).hexdigest()
        for name, text in files.items()
    }
    manifest = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "key": bundle.key,
        "config_hash": bundle.config_hash,
        "corpus_fingerprint": bundle.corpus_fingerprint,
        "corpus_id": bundle.config.corpus_id,
        "files": hashes,
    }
    files["manifest.json"] = _canonical_json_text(manifest)

    final_dir = bundles.path_for(bundle.key)
    tmp_dir = bundles.root / f".tmp-{bundle.key[:12]}-{uuid.uuid4().hex[:8]}"
    tmp_dir.mkdir(parents=True)
    try:
        for name, text in files.items():
            (tmp_dir / name).write_text(text, encoding="utf-8")
        run_info = {
            "created_at": datetime.now(timezone.utc).isoformat(),
            "stage_seconds": {k: round(v, 6) for k, v in timings.items()},
        }
        (tmp_dir / RUN_INFO_FILE).write_text(
            json.dumps(run_info, indent=2) + "\n", encoding="utf-8"
        )
        if final_dir.exists():  # lost a race to another worker: keep theirs
            shutil.rmtree(tmp_dir)
            return
        os.replace(tmp_dir, final_dir)
    except Exception:
        shutil.rmtree(tmp_dir, ignore_errors=True)
        raise


def deterministic_files(path: str | Path) -> dict[str, bytes]:
    """Bundle payload for byte-comparison; the timing sidecar is excluded."""
    path = Path(path)
    return {
        p.name: p.read_bytes()
        for p in sorted(path.iterdir())
        if p.name != RUN_INFO_FILE
    }


def load_bundle(path: str | Path) -> AnalysisBundle:
    """Reconstruct an AnalysisBundle from its directory."""
    path = Path(path)
    manifest_path = path / "manifest.json"
    if not manifest_path.exists():
        raise NotFoundError(f"no bundle at {path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    config = PipelineConfig.from_dict(
        json.loads((path / "config.json").read_text(encoding="utf-8"))
    )
    stats_raw = json.loads((path / "stats.json").read_text(encoding="utf-8"))
    stats = CorpusStats(
        total=stats_raw["total"],
        by_language=stats_raw["by_language"],
        by_source=stats_raw["by_source"],
        date_range=tuple(date.fromisoformat(d) for d in stats_raw["date_range"])
        if stats_raw["date_range"]
        else None,
    )

    def read_csv(name):
        text = (path / name).read_text(encoding="utf-8")
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        return header, [row for row in reader if row]

    _, top_rows = read_csv("top_terms.csv")
    top = [dtm.TermFrequency(r[0], int(r[1]), int(r[2])) for r in top_rows]

    _, sent_rows = read_csv("sentiment.csv")
    points = tuple(
        sentiment.SentimentPoint(
            day=date.fromisoformat(r[0]),
            mean_polarity=float(r[1]),
            doc_count=int(r[2]),
            total_polarity=float(r[3]),
        )
        for r in sent_rows
    )
    peaks_raw = json.loads((path / "sentiment_peaks.json").read_text(encoding="utf-8"))
    peaks = [date.fromisoformat(d) for d in peaks_raw["peaks"]]

    cooc_edges = {
        (u, v): int(w)
        for (u, v), w in graphio.parse_edge_list(
            (path / "cooc_edges.csv").read_text(encoding="utf-8")
        ).items()
    }
    cooc_nodes, _, cooc_attrs = graphio.parse_graphml(
        (path / "cooc.graphml").read_text(encoding="utf-8")
    )
    cooc_graph = coocnet.CoocGraph(
        nodes=tuple(cooc_nodes), edges=cooc_edges, mode=config.cooc_mode
    )
    _, cooc_cent_rows = read_csv("cooc_centrality.csv")
    cooc_table = coocnet.CentralityTable(
        rows=tuple(
            coocnet.CentralityRow(r[0], float(r[1]), float(r[2]))
            for r in cooc_cent_rows
        )
    )

    _, ttm_rows = read_csv("term_topic.csv")
    weight: dict[tuple[str, int], float] = {}
    topics = set()
    terms = set()
    for label, term, w in ttm_rows:
        k = int(label.split("_")[1]) - 1
        topics.add(k)
        terms.add(term)
        weight[(term, k)] = float(w)
    ttm = topicmodel.TermTopicMatrix(
        topics=tuple(sorted(topics)), terms=tuple(sorted(terms)), weight=weight
    )
    bip_graph = topicnet.build_bipartite(ttm)
    _, bip_rows = read_csv("topicnet_centrality.csv")
    bip_table = topicnet.BipartiteCentrality(
        rows=tuple(
            topicnet.BipartiteCentralityRow(r[0], r[1], float(r[2]), float(r[3]))
            for r in bip_rows
        )
    )
    bridges_raw = json.loads((path / "bridges.json").read_text(encoding="utf-8"))
    bridges = [
        topicnet.BridgeTerm(
            term=b["term"],
            topics=tuple(int(t.split("_")[1]) - 1 for t in b["topics"]),
        )
        for b in bridges_raw
    ]

    series = sentiment.SentimentSeries(points=points)
    return AnalysisBundle(
        key=manifest["key"],
        config_hash=manifest["config_hash"],
        corpus_fingerprint=manifest["corpus_fingerprint"],
        config=config,
        stats=stats,
        top_terms=top,
        sentiment_series=series,
        peaks=peaks,
        cooc_graph=cooc_graph,
        cooc_table=cooc_table,
        ttm=ttm,
        bipartite_graph=bip_graph,
        bipartite_table=bip_table,
        bridges=bridges,
        path=path,
    )


def section_payload(bundle_path: str | Path, name: str) -> dict:
    """JSON view of one bundle section, built from the bundle files."""
    path = Path(bundle_path)
    if name not in SECTION_NAMES:
        raise NotFoundError(f"unknown section: {name}")
    if not (path / "manifest.json").exists():
        raise NotFoundError(f"no bundle at {path}")

    def read_csv(fname):
        text = (path / fname).read_text(encoding="utf-8")
        reader = csv.reader(io.StringIO(text))
        next(reader)
        return [row for row in reader if row]

    if name == "topterms":
        return {
            "terms": [
                {"term": r[0], "total_count": int(r[1]), "doc_count": int(r[2])}
                for r in read_csv("top_terms.csv")
            ]
        }
    if name == "sentiment":
        peaks = json.loads(
            (path / "sentiment_peaks.json").read_text(encoding="utf-8")
        )
        return {
            "points": [
                {
                    "date": r[0],
                    "mean": float(r[1]),
                    "docs": int(r[2]),
                    "total": float(r[3]),
                }
                for r in read_csv("sentiment.csv")
            ],
            "peaks": peaks["peaks"],
        }
    if name == "coocnet":
        rows = read_csv("cooc_centrality.csv")
        return {
            "nodes": [r[0] for r in rows],
            "edges": [
                {"source": r[0], "target": r[1], "weight": float(r[2])}
                for r in read_csv("cooc_edges.csv")
            ],
            "centrality": [
                {"node": r[0], "degree": float(r[1]), "closeness": float(r[2])}
                for r in rows
            ],
        }
    if name == "topics":
        rows = read_csv("term_topic.csv")  # sorted (topic, -weight, term)
        topics: dict[str, list] = {}
        for label, term, w in rows:
            topics.setdefault(label, []).append({"term": term, "weight": float(w)})
        return {
            "topics": sorted(topics),
            "top_terms": topics,
        }
    # topicnet
    cent = read_csv("topicnet_centrality.csv")
    bridges = json.loads((path / "bridges.json").read_text(encoding="utf-8"))
    return {
        "topics": [r[0] for r in cent if r[1] == "topic"],
        "terms": [r[0] for r in cent if r[1] == "term"],
        "edges": [
            {"topic": r[0], "term": r[1], "weight": float(r[2])}
            for r in read_csv("topicnet_edges.csv")
        ],
        "centrality": [
            {
                "node": r[0],
                "mode": r[1],
                "degree": float(r[2]),
                "closeness": float(r[3]),
            }
            for r in cent
        ],
        "bridges": bridges,
    }
