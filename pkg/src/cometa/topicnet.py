"""Two-mode topics-terms network built from the terms-topics matrix.

Topic and term nodes are kept strictly apart (edges only cross modes).
Degree uses the two-mode convention of normalizing by the opposite mode's
size — for K=5 topics that is exactly why term degrees land on the grid
0.2, 0.4, 0.6, 0.8, 1.0. Closeness treats the bipartite graph as a plain
unweighted graph (each topic-term hop counts 1) with the same
component-scaled normalization as the co-occurrence network. Edge weights
(phi values) ride along as display attributes only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coocnet import closeness_from_adjacency
from .errors import ConfigurationError
from .topicmodel import TermTopicMatrix

TOPIC_MODE = "topic"
TERM_MODE = "term"

NodeKey = tuple[str, object]  # (mode, topic id or term string)


def topic_label(k: int) -> str:
    """Human-facing 1-based topic node label."""
    return f"topic_{k + 1}"


@dataclass(frozen=True)
class BipartiteGraph:
    """Topics-terms graph; every term node touches at least one topic."""

    topic_nodes: tuple[int, ...]
    term_nodes: tuple[str, ...]
    edges: dict[tuple[int, str], float]

    def topics_of(self, term: str) -> tuple[int, ...]:
        return tuple(k for k in self.topic_nodes if (k, term) in self.edges)

    def terms_of(self, topic: int) -> tuple[str, ...]:
        return tuple(t for t in self.term_nodes if (topic, t) in self.edges)

    def adjacency(self) -> dict[NodeKey, set[NodeKey]]:
        adj: dict[NodeKey, set[NodeKey]] = {
            (TOPIC_MODE, k): set() for k in self.topic_nodes
        }
        adj.update({(TERM_MODE, t): set() for t in self.term_nodes})
        for k, t in self.edges:
            adj[(TOPIC_MODE, k)].add((TERM_MODE, t))
            adj[(TERM_MODE, t)].add((TOPIC_MODE, k))
        return adj


@dataclass(frozen=True)
class BipartiteCentralityRow:
    node: str
    mode: str
    degree: float
    closeness: float


@dataclass(frozen=True)
class BipartiteCentrality:
    rows: tuple[BipartiteCentralityRow, ...]

    def term_row(self, term: str) -> BipartiteCentralityRow:
        return next(r for r in self.rows if r.mode == TERM_MODE and r.node == term)


@dataclass(frozen=True)
class BridgeTerm:
    term: str
    topics: tuple[int, ...]


def build_bipartite(ttm: TermTopicMatrix) -> BipartiteGraph:
    """Edge (k, term) iff the term is among topic k's selected top terms."""
    if not ttm.weight:
        raise ConfigurationError("terms-topics matrix is empty")
    edges = {(k, term): w for (term, k), w in ttm.weight.items()}
    graph = BipartiteGraph(
        topic_nodes=ttm.topics,
        term_nodes=ttm.terms,
        edges=edges,
    )
    _assert_two_mode(graph)
    return graph


def _assert_two_mode(graph: BipartiteGraph) -> None:
    """Every edge must join a known topic to a known term."""
    topics = set(graph.topic_nodes)
    terms = set(graph.term_nodes)
    for k, t in graph.edges:
        if k not in topics or t not in terms:
            raise ConfigurationError(f"edge ({k!r}, {t!r}) violates two-mode purity")
    dangling = terms - {t for _, t in graph.edges}
    if dangling:
        raise ConfigurationError(f"term nodes without edges: {sorted(dangling)[:3]}")


def bipartite_degree(graph: BipartiteGraph) -> dict[NodeKey, float]:
    """Degree normalized by the opposite mode's size.

    Terms divide their incident-topic count by K; topics divide their
    incident-term count by the number of term nodes.
    """
    k_count = len(graph.topic_nodes)
    term_count = len(graph.term_nodes)
    result: dict[NodeKey, float] = {}
    for k in graph.topic_nodes:
        result[(TOPIC_MODE, k)] = len(graph.terms_of(k)) / term_count
    for t in graph.term_nodes:
        result[(TERM_MODE, t)] = len(graph.topics_of(t)) / k_count
    return result


def bipartite_closeness(graph: BipartiteGraph) -> dict[NodeKey, float]:
    """Closeness over the bipartite graph's unweighted shortest paths."""
    adjacency = graph.adjacency()
    return closeness_from_adjacency(adjacency, adjacency.keys())


def compute_bipartite_centrality(graph: BipartiteGraph) -> BipartiteCentrality:
    """Both measures for every node: topics first (by id), then terms."""
    degree = bipartite_degree(graph)
    closeness = bipartite_closeness(graph)
    rows = []
    for k in sorted(graph.topic_nodes):
        key = (TOPIC_MODE, k)
        rows.append(
            BipartiteCentralityRow(
                node=topic_label(k),
                mode=TOPIC_MODE,
                degree=degree[key],
                closeness=closeness[key],
            )
        )
    for t in sorted(graph.term_nodes):
        key = (TERM_MODE, t)
        rows.append(
            BipartiteCentralityRow(
                node=t, mode=TERM_MODE, degree=degree[key], closeness=closeness[key]
            )
        )
    return BipartiteCentrality(rows=tuple(rows))


def bridge_terms(graph: BipartiteGraph, min_topics: int = 2) -> list[BridgeTerm]:
    """Terms linking at least `min_topics` topics, most-connected first."""
    if min_topics < 1:
        raise ConfigurationError("min_topics must be >= 1")
    bridges = [
        BridgeTerm(term=t, topics=graph.topics_of(t))
        for t in graph.term_nodes
        if len(graph.topics_of(t)) >= min_topics
    ]
    bridges.sort(key=lambda b: (-len(b.topics), b.term))
    return bridges


def export_edges(graph: BipartiteGraph) -> dict[tuple[str, str], float]:
    """Edges keyed by (topic label, term) for the shared graph writers."""
    return {(topic_label(k), t): w for (k, t), w in graph.edges.items()}


def export_nodes(graph: BipartiteGraph) -> list[str]:
    return [topic_label(k) for k in graph.topic_nodes] + list(graph.term_nodes)
