"""Command-line interface mirroring the HTTP API plus direct module access."""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from . import __version__, coocnet, dtm, graphio, sentiment, topicmodel, topicnet
from .corpus import CorpusStore
from .errors import CometaError, StageError
from .pipeline import BundleStore, PipelineConfig, run_pipeline
from .preprocess import PreprocessConfig, load_stopwords, preprocess_corpus
from .topicmodel import LdaConfig


def _store(ctx) -> CorpusStore:
    return CorpusStore(ctx.obj["data_dir"])


def _preprocess_config(language, stopwords_file, min_token_len) -> PreprocessConfig:
    words = load_stopwords(language, path=stopwords_file)
    return PreprocessConfig(
        language=language, stopwords=words, min_token_len=min_token_len
    )


def _tokenized_view(ctx, corpus_id, language, stopwords_file, min_token_len=2):
    store = _store(ctx)
    view = store.filter_corpus(corpus_id, languages={language})
    articles = store.resolve(view)
    config = _preprocess_config(language, stopwords_file, min_token_len)
    return store, preprocess_corpus(articles, config)


@click.group()
@click.version_option(version=__version__, prog_name="cometa")
@click.option(
    "--data-dir",
    envvar="COMETA_DATA_DIR",
    default="./cometa_data",
    show_default=True,
    help="Corpus and bundle storage root (env: COMETA_DATA_DIR).",
)
@click.pass_context
def main(ctx, data_dir):
    """Media-coverage analytics: corpora, sentiment, networks, topics."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = Path(data_dir)
    ctx.obj["data_dir"].mkdir(parents=True, exist_ok=True)


@main.command()
@click.option("--corpus", "corpus_id", required=True)
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.pass_context
def ingest(ctx, corpus_id, files):
    """Ingest JSON-lines article files into a corpus."""
    store = _store(ctx)
    records = []
    for name in files:
        with open(name, encoding="utf-8") as fh:
            records.extend(line for line in fh.read().splitlines() if line.strip())
    report = store.ingest_documents(records, corpus_id)
    click.echo(json.dumps(report.to_dict(), indent=2))
    if report.rejected:
        sys.exit(1)


@main.command()
@click.option("--corpus", "corpus_id", required=True)
@click.pass_context
def stats(ctx, corpus_id):
    """Print corpus statistics."""
    click.echo(json.dumps(_store(ctx).corpus_stats(corpus_id).to_dict(), indent=2))


@main.command()
@click.option("--corpus", "corpus_id", required=True)
@click.option("--out", type=click.Path(), default=None, help="Write to file instead of stdout.")
@click.pass_context
def export(ctx, corpus_id, out):
    """Export a corpus as normalized JSON lines."""
    lines = _store(ctx).export_corpus(corpus_id)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            click.echo(line)


@main.command()
@click.option("--corpus", "corpus_id", required=True)
@click.option("--lang", default="en", show_default=True)
@click.option("--stopwords", "stopwords_file", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def preprocess(ctx, corpus_id, lang, stopwords_file, out):
    """Tokenize a corpus; emits one JSON object per document."""
    _, docs = _tokenized_view(ctx, corpus_id, lang, stopwords_file)
    sink = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        for doc in docs:
            sink.write(
                json.dumps(
                    {
                        "id": doc.article_id,
                        "published_at": doc.published_at.isoformat(),
                        "tokens": list(doc.tokens),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    finally:
        if out:
            sink.close()


@main.command("dtm")
@click.option("--corpus", "corpus_id", required=True)
@click.option("--lang", default="en", show_default=True)
@click.option("--stopwords", "stopwords_file", type=click.Path(exists=True), default=None)
@click.option("--max-sparsity", default=0.99, show_default=True)
@click.option("--top", default=50, show_default=True)
@click.option("--export-triplets", type=click.Path(), default=None,
              help="Write doc,term,count triplets plus a .vocab sidecar.")
@click.pass_context
def dtm_command(ctx, corpus_id, lang, stopwords_file, max_sparsity, top, export_triplets):
    """Build the document-term matrix and print the top terms."""
    _, docs = _tokenized_view(ctx, corpus_id, lang, stopwords_file)
    matrix = dtm.trim_sparse(dtm.build_dtm(docs), max_sparsity)
    for f in dtm.top_terms(matrix, top):
        click.echo(f"{f.term}\t{f.total_count}\t{f.doc_count}")
    if export_triplets:
        with open(export_triplets, "w", encoding="utf-8") as fh:
            fh.write("doc_id,term,count\n")
            for doc_id, term, count in matrix.to_triplets():
                fh.write(f"{doc_id},{term},{count}\n")
        sidecar = Path(export_triplets).with_suffix(".vocab")
        sidecar.write_text(
            "\n".join(matrix.vocabulary) + "\n", encoding="utf-8"
        )


@main.command("sentiment")
@click.option("--corpus", "corpus_id", required=True)
@click.option("--lang", default="en", show_default=True)
@click.option("--lexicon", "lexicon_file", type=click.Path(exists=True), default=None,
              help="term<TAB>polarity file; defaults to the bundled list.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--peak-window", default=3, show_default=True)
@click.option("--peak-prominence", default=0.0, show_default=True)
@click.pass_context
def sentiment_command(ctx, corpus_id, lang, lexicon_file, out, peak_window, peak_prominence):
    """Score sentiment per publication day; CSV columns date,mean,docs,total."""
    _, docs = _tokenized_view(ctx, corpus_id, lang, None)
    lexicon = (
        sentiment.load_lexicon(lexicon_file, lang)
        if lexicon_file
        else sentiment.bundled_lexicon(lang)
    )
    series = sentiment.sentiment_series(docs, lexicon)
    rows = ["date,mean,docs,total"] + [
        f"{p.day.isoformat()},{p.mean_polarity},{p.doc_count},{p.total_polarity}"
        for p in series.points
    ]
    text = "\n".join(rows) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    peaks = sentiment.find_peaks(series, peak_window, peak_prominence)
    if peaks:
        click.echo("peaks: " + ", ".join(d.isoformat() for d in peaks), err=True)


@main.command("coocnet")
@click.option("--corpus", "corpus_id", required=True)
@click.option("--lang", default="en", show_default=True)
@click.option("--mode", type=click.Choice(["binary", "count"]), default="binary",
              show_default=True)
@click.option("--min-weight", default=2, show_default=True)
@click.option("--max-sparsity", default=0.99, show_default=True)
@click.option("--out-edges", type=click.Path(), default=None)
@click.option("--out-centrality", type=click.Path(), default=None)
@click.option("--out-graphml", type=click.Path(), default=None)
@click.pass_context
def coocnet_command(ctx, corpus_id, lang, mode, min_weight, max_sparsity,
                    out_edges, out_centrality, out_graphml):
    """Build the term co-occurrence network and its centrality table."""
    _, docs = _tokenized_view(ctx, corpus_id, lang, None)
    matrix = dtm.trim_sparse(dtm.build_dtm(docs), max_sparsity)
    graph = coocnet.cooccurrence(matrix, mode=mode, min_weight=min_weight)
    table = coocnet.compute_centrality(graph)
    rows = [(r.node, r.degree, r.closeness) for r in table.rows]
    attrs = {r.node: {"degree": r.degree, "closeness": r.closeness} for r in table.rows}
    if out_edges:
        graphio.export_graph(graph.nodes, graph.edges, "edgelist", out_edges)
    if out_centrality:
        graphio.export_graph(
            graph.nodes, graph.edges, "centrality", out_centrality,
            centrality_rows=rows,
        )
    if out_graphml:
        graphio.export_graph(
            graph.nodes, graph.edges, "graphml", out_graphml, node_attrs=attrs
        )
    if not (out_edges or out_centrality or out_graphml):
        click.echo(graphio.render_centrality_csv(rows), nl=False)


@main.command("lda")
@click.option("--corpus", "corpus_id", required=True)
@click.option("--lang", default="en", show_default=True)
@click.option("-k", "k", default=5, show_default=True)
@click.option("--alpha", default=None, type=float, help="Defaults to 50/K.")
@click.option("--beta", default=0.01, show_default=True)
@click.option("--iters", default=1000, show_default=True)
@click.option("--burn-in", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--max-sparsity", default=0.99, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Save the fitted model.")
@click.option("--top", default=10, show_default=True, help="Top terms to print per topic.")
@click.pass_context
def lda_command(ctx, corpus_id, lang, k, alpha, beta, iters, burn_in, seed,
                max_sparsity, out, top):
    """Fit LDA by collapsed Gibbs sampling and print per-topic top terms."""
    _, docs = _tokenized_view(ctx, corpus_id, lang, None)
    matrix = dtm.trim_sparse(dtm.build_dtm(docs), max_sparsity)
    config = LdaConfig(
        k=k, alpha=alpha, beta=beta, iterations=iters, burn_in=burn_in, seed=seed
    )
    model = topicmodel.fit_lda(matrix, config)
    ttm = topicmodel.top_terms_per_topic(model, n=top)
    for topic in ttm.topics:
        ranked = sorted(
            ttm.terms_of(topic), key=lambda t: -ttm.weight[(t, topic)]
        )
        click.echo(f"{topicnet.topic_label(topic)}: {', '.join(ranked)}")
    click.echo(
        f"log_likelihood: {topicmodel.log_likelihood(model, matrix):.2f}", err=True
    )
    if out:
        topicmodel.save_model(model, out)


@main.command("topicnet")
@click.option("--model", "model_file", required=True, type=click.Path(exists=True))
@click.option("--top", default=20, show_default=True)
@click.option("--out-edges", type=click.Path(), default=None)
@click.option("--out-centrality", type=click.Path(), default=None)
@click.option("--out-graphml", type=click.Path(), default=None)
def topicnet_command(model_file, top, out_edges, out_centrality, out_graphml):
    """Build the topics-terms network from a saved model."""
    model = topicmodel.load_model(model_file)
    ttm = topicmodel.top_terms_per_topic(model, n=top)
    graph = topicnet.build_bipartite(ttm)
    table = topicnet.compute_bipartite_centrality(graph)
    edges = topicnet.export_edges(graph)
    nodes = topicnet.export_nodes(graph)
    rows = [(r.node, r.mode, r.degree, r.closeness) for r in table.rows]
    attrs = {
        r.node: {"mode": r.mode, "degree": r.degree, "closeness": r.closeness}
        for r in table.rows
    }
    if out_edges:
        graphio.export_graph(nodes, edges, "edgelist", out_edges)
    if out_centrality:
        graphio.export_graph(
            nodes, edges, "centrality", out_centrality,
            centrality_rows=rows,
            centrality_header=("node", "mode", "degree", "closeness"),
        )
    if out_graphml:
        graphio.export_graph(nodes, edges, "graphml", out_graphml, node_attrs=attrs)
    if not (out_edges or out_centrality or out_graphml):
        click.echo(
            graphio.render_centrality_csv(
                rows, header=("node", "mode", "degree", "closeness")
            ),
            nl=False,
        )


@main.command("run")
@click.option("--config", "config_file", required=True, type=click.Path(exists=True))
@click.pass_context
def run_command(ctx, config_file):
    """Run the full pipeline from a JSON config; prints the bundle location."""
    with open(config_file, encoding="utf-8") as fh:
        config = PipelineConfig.from_dict(json.load(fh))
    store = _store(ctx)
    bundles = BundleStore(ctx.obj["data_dir"] / "bundles")
    try:
        bundle = run_pipeline(
            config, store, bundles, on_stage=lambda s: click.echo(f"stage: {s}", err=True)
        )
    except StageError as exc:
        raise click.ClickException(f"[{exc.stage}] {exc.cause}")
    except CometaError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps({"key": bundle.key, "path": str(bundle.path)}, indent=2))


@main.command("serve")
@click.option("--bind", default="127.0.0.1:8787", show_default=True,
              help="host:port to listen on.")
@click.pass_context
def serve_command(ctx, bind):
    """Serve the HTTP API (poll-based job queue)."""
    from .service import serve

    host, _, port = bind.rpartition(":")
    serve(ctx.obj["data_dir"], host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
