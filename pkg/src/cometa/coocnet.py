"""Term co-occurrence networks projected from the document-term matrix.

Reading the DTM as an affiliation matrix, two terms are linked when they
appear in the same document: binary mode counts co-containing documents,
count mode sums the per-document count products. Context is the whole
document, not a sliding window. Centrality follows the classical
normalizations: degree over n-1, closeness from unweighted shortest
paths with component-relative scaling so disconnected graphs still score.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .dtm import DocumentTermMatrix
from .errors import ConfigurationError, DegenerateGraphError

Edge = tuple[str, str]


@dataclass(frozen=True)
class CoocGraph:
    """Undirected weighted term graph; each pair stored once in sorted order."""

    nodes: tuple[str, ...]
    edges: dict[Edge, int]
    mode: str

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class CentralityRow:
    node: str
    degree: float
    closeness: float


@dataclass(frozen=True)
class CentralityTable:
    rows: tuple[CentralityRow, ...]

    def degree_of(self, node: str) -> float:
        return self._index()[node].degree

    def closeness_of(self, node: str) -> float:
        return self._index()[node].closeness

    def _index(self) -> dict[str, CentralityRow]:
        return {r.node: r for r in self.rows}


def cooccurrence(
    dtm: DocumentTermMatrix, mode: str = "binary", min_weight: int = 1
) -> CoocGraph:
    """Project the DTM into a term graph.

    binary: weight(u,v) = number of documents containing both terms.
    count:  weight(u,v) = sum over documents of count(u) * count(v).
    Pairs below `min_weight` are dropped (the default keeps everything);
    nodes are the full vocabulary, so pruned terms stay as isolates.
    """
    if mode not in ("binary", "count"):
        raise ConfigurationError(f"unknown co-occurrence mode: {mode!r}")
    if min_weight < 1:
        raise ConfigurationError("min_weight must be >= 1")
    weights: dict[tuple[int, int], int] = {}
    matrix = dtm.counts
    for d in range(dtm.n_docs):
        start, end = matrix.indptr[d], matrix.indptr[d + 1]
        term_idx = sorted(matrix.indices[start:end].tolist())
        if mode == "binary":
            for i, j in combinations(term_idx, 2):
                weights[(i, j)] = weights.get((i, j), 0) + 1
        else:
            row = {
                int(v): int(c)
                for v, c in zip(matrix.indices[start:end], matrix.data[start:end])
            }
            for i, j in combinations(term_idx, 2):
                weights[(i, j)] = weights.get((i, j), 0) + row[i] * row[j]
    vocab = dtm.vocabulary
    edges = {
        (vocab[i], vocab[j]): w
        for (i, j), w in weights.items()
        if w >= min_weight
    }
    return CoocGraph(nodes=vocab, edges=edges, mode=mode)


def degree_centrality(graph: CoocGraph) -> dict[str, float]:
    """deg(v)/(n-1), by edge presence only; needs at least two nodes."""
    n = len(graph.nodes)
    if n < 2:
        raise DegenerateGraphError("degree centrality needs at least 2 nodes")
    adj = graph.adjacency()
    return {node: len(adj[node]) / (n - 1) for node in graph.nodes}


def closeness_centrality(graph: CoocGraph) -> dict[str, float]:
    """Normalized closeness from unweighted shortest paths.

    Isolated nodes score 0; in a disconnected graph each node is scored
    against its own component and scaled down by how much of the graph
    that component covers, so values stay in [0, 1].
    """
    return closeness_from_adjacency(graph.adjacency(), graph.nodes)


def compute_centrality(graph: CoocGraph) -> CentralityTable:
    """Degree and closeness for every node, rows in node order."""
    degree = degree_centrality(graph)
    closeness = closeness_centrality(graph)
    return CentralityTable(
        rows=tuple(
            CentralityRow(node=n, degree=degree[n], closeness=closeness[n])
            for n in graph.nodes
        )
    )


# -- shared shortest-path machinery (also used by the topic-term network) ---


def bfs_distances(adjacency: Mapping[str, set[str]], start: str) -> dict[str, int]:
    """Hop distances from `start` to every reachable node, including itself."""
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def closeness_from_adjacency(
    adjacency: Mapping[str, set[str]], nodes: Iterable[str]
) -> dict[str, float]:
    """Closeness of every node over an undirected adjacency map.

    For a node v with distance sum S over its component of size c in an
    n-node graph: (n-1)/S scaled by (c-1)/(n-1), i.e. zero when isolated.
    """
    node_list = list(nodes)
    n = len(node_list)
    result: dict[str, float] = {}
    for v in node_list:
        dist = bfs_distances(adjacency, v)
        total = sum(dist.values())
        if total == 0 or n < 2:
            result[v] = 0.0
        else:
            component = len(dist)
            result[v] = ((n - 1) / total) * ((component - 1) / (n - 1))
    return result
