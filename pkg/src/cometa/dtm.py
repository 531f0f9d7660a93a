"""Sparse document-term matrix construction, sparsity trimming, summaries.

The matrix backs everything downstream: frequency summaries for the
wordcloud and barplot, the affiliation reading that yields co-occurrence
networks, and the token streams the topic model samples over. Counts are
raw occurrences (no tf-idf); vocabulary order is lexicographic so runs
are reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .errors import ConfigurationError, EmptyCorpusError
from .preprocess import TokenizedDoc


@dataclass(frozen=True)
class DocumentTermMatrix:
    """D x V sparse count matrix plus its document and vocabulary indices."""

    doc_ids: tuple[str, ...]
    vocabulary: tuple[str, ...]
    counts: sparse.csr_matrix

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_terms(self) -> int:
        return len(self.vocabulary)

    @property
    def term_index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.vocabulary)}

    @property
    def empty_doc_ids(self) -> tuple[str, ...]:
        """Documents retained as all-zero rows (e.g. everything trimmed)."""
        row_sums = np.asarray(self.counts.sum(axis=1)).ravel()
        return tuple(
            doc_id for doc_id, s in zip(self.doc_ids, row_sums) if s == 0
        )

    def doc_count(self) -> np.ndarray:
        """Number of documents containing each term (V-vector)."""
        return np.asarray((self.counts > 0).sum(axis=0)).ravel()

    def total_count(self) -> np.ndarray:
        """Total occurrences of each term (V-vector)."""
        return np.asarray(self.counts.sum(axis=0)).ravel()

    def doc_term_indices(self, d: int) -> np.ndarray:
        """Sorted vocabulary indices of the terms present in document d."""
        row = self.counts.getrow(d)
        return np.sort(row.indices)

    def to_triplets(self) -> list[tuple[str, str, int]]:
        """Sparse (doc_id, term, count) triplets in deterministic order."""
        coo = self.counts.tocoo()
        cells = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
        return [
            (self.doc_ids[r], self.vocabulary[c], int(v)) for r, c, v in cells
        ]


@dataclass(frozen=True)
class TermFrequency:
    term: str
    total_count: int
    doc_count: int


def build_dtm(docs: Sequence[TokenizedDoc]) -> DocumentTermMatrix:
    """Count term occurrences per document.

    Vocabulary is the sorted union of all tokens. Documents with zero
    tokens are retained as zero rows so downstream series stay aligned;
    if every document is empty the corpus is unusable and we raise.
    """
    vocab = sorted({t for doc in docs for t in doc.tokens})
    if not vocab:
        raise EmptyCorpusError("all documents are empty; nothing to count")
    index = {t: i for i, t in enumerate(vocab)}
    rows, cols, data = [], [], []
    for d, doc in enumerate(docs):
        cell_counts: dict[int, int] = {}
        for token in doc.tokens:
            v = index[token]
            cell_counts[v] = cell_counts.get(v, 0) + 1
        for v, c in cell_counts.items():
            rows.append(d)
            cols.append(v)
            data.append(c)
    counts = sparse.csr_matrix(
        (data, (rows, cols)), shape=(len(docs), len(vocab)), dtype=np.int64
    )
    return DocumentTermMatrix(
        doc_ids=tuple(doc.article_id for doc in docs),
        vocabulary=tuple(vocab),
        counts=counts,
    )


def trim_sparse(
    dtm: DocumentTermMatrix, max_sparsity: float
) -> DocumentTermMatrix:
    """Drop terms whose sparsity (fraction of documents missing them) exceeds the cap.

    A term survives iff 1 - doc_count/D <= max_sparsity. Document rows are
    untouched; trimming everything raises with advice to raise the cap.
    """
    if not (0.0 < max_sparsity <= 1.0):
        raise ConfigurationError("max_sparsity must be in (0, 1]")
    if max_sparsity == 1.0:
        return dtm
    d = dtm.n_docs
    doc_counts = dtm.doc_count()
    keep = (1.0 - doc_counts / d) <= max_sparsity
    if not keep.any():
        raise EmptyCorpusError(
            f"max_sparsity={max_sparsity} removes every term; raise the threshold"
        )
    kept_idx = np.flatnonzero(keep)
    return DocumentTermMatrix(
        doc_ids=dtm.doc_ids,
        vocabulary=tuple(dtm.vocabulary[i] for i in kept_idx),
        counts=dtm.counts[:, kept_idx].tocsr(),
    )


def term_frequencies(dtm: DocumentTermMatrix) -> list[TermFrequency]:
    """All terms ranked by total count descending, ties broken by term ascending."""
    totals = dtm.total_count()
    doc_counts = dtm.doc_count()
    freqs = [
        TermFrequency(term=t, total_count=int(totals[i]), doc_count=int(doc_counts[i]))
        for i, t in enumerate(dtm.vocabulary)
    ]
    freqs.sort(key=lambda f: (-f.total_count, f.term))
    return freqs


def top_terms(dtm: DocumentTermMatrix, n: int) -> list[TermFrequency]:
    """First n entries of the frequency ranking (all of them when n >= V)."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    return term_frequencies(dtm)[:n]
