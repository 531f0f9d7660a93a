"""Shared fixtures: token docs, the reference topic-term fixture, and
the synthetic LDA corpora used by recovery tests."""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np
import pytest

from cometa.preprocess import TokenizedDoc
from cometa.topicmodel import TermTopicMatrix

# Reference five-topic fixture: 15 terms whose membership counts put the
# normalized term degrees on the exact grid {0.2, 0.4, 0.6, 0.8}. The
# concrete topic sets are chosen so every pair of topics shares at least
# one term, which keeps the graph diameter small and closeness monotone
# in membership.
FIVE_TOPIC_MEMBERSHIPS: dict[str, tuple[int, ...]] = {
    "people": (0, 1, 2, 3),
    "virus": (0, 2, 3, 4),
    "health": (0, 1, 2),
    "outbreak": (2, 3, 4),
    "china": (0, 1, 4),
    "public": (0, 1),
    "uk": (1, 2),
    "government": (2, 3),
    "world": (3, 4),
    "cases": (0, 4),
    "wuhan": (0, 2),
    "masks": (0,),
    "staff": (1,),
    "home": (2,),
    "patients": (3,),
}

EXPECTED_DEGREE_GRID = {
    "people": 0.800,
    "virus": 0.800,
    "health": 0.600,
    "outbreak": 0.600,
    "china": 0.600,
    "public": 0.400,
    "uk": 0.400,
    "government": 0.400,
    "world": 0.400,
    "cases": 0.400,
    "wuhan": 0.400,
    "masks": 0.200,
    "staff": 0.200,
    "home": 0.200,
    "patients": 0.200,
}


def tdoc(article_id: str, tokens, day: date = date(2020, 2, 1), language="en"):
    return TokenizedDoc(
        article_id=article_id,
        tokens=tuple(tokens),
        published_at=day,
        language=language,
    )


def make_five_topic_ttm() -> TermTopicMatrix:
    """Terms-topics matrix with the reference memberships and nominal weights."""
    weight = {}
    for term, topics in FIVE_TOPIC_MEMBERSHIPS.items():
        for k in topics:
            weight[(term, k)] = 0.05
    return TermTopicMatrix(
        topics=(0, 1, 2, 3, 4),
        terms=tuple(sorted(FIVE_TOPIC_MEMBERSHIPS)),
        weight=weight,
    )


def synthetic_lda_corpus(
    k: int = 3,
    vocab_size: int = 30,
    n_docs: int = 200,
    doc_len: int = 50,
    seed: int = 7,
    own_mass: float = 0.97,
    mixture_alpha: float = 0.3,
):
    """Generate documents from a known LDA model with near-disjoint topics.

    Returns (docs, phi_star, theta_star). Topic k owns the vocabulary block
    [k*V/K, (k+1)*V/K) with `own_mass` of its probability; the rest spreads
    uniformly over the other blocks.
    """
    assert vocab_size % k == 0
    block = vocab_size // k
    width = len(str(vocab_size - 1))
    vocab = [f"w{i:0{width}d}" for i in range(vocab_size)]
    phi_star = np.full((k, vocab_size), (1.0 - own_mass) / (vocab_size - block))
    for topic in range(k):
        phi_star[topic, topic * block : (topic + 1) * block] = own_mass / block
    rng = np.random.default_rng(seed)
    theta_star = rng.dirichlet([mixture_alpha] * k, size=n_docs)
    docs = []
    base = date(2020, 1, 4)
    for d in range(n_docs):
        topics = rng.choice(k, size=doc_len, p=theta_star[d])
        tokens = [
            vocab[int(rng.choice(vocab_size, p=phi_star[t]))] for t in topics
        ]
        docs.append(tdoc(f"doc{d:04d}", tokens, base + timedelta(days=d % 30)))
    return docs, phi_star, theta_star


def clustered_corpus(seed: int = 11):
    """Five disjoint seeded vocabulary clusters, 50 docs each.

    Each document draws 92% of its tokens from its own cluster, so a
    five-topic fit should recover one theme per topic.
    """
    clusters = [
        ["health", "masks", "staff", "nurses", "doctors", "hospital", "equipment", "protective"],
        ["global", "government", "economy", "travel", "markets", "trade", "policy", "impact"],
        ["cases", "virus", "china", "wuhan", "beijing", "quarantine", "spread", "province"],
        ["outbreak", "flu", "disease", "symptoms", "infection", "pathogen", "vaccine", "immunity"],
        ["time", "people", "public", "media", "news", "social", "response", "information"],
    ]
    rng = np.random.default_rng(seed)
    all_terms = [t for c in clusters for t in c]
    # head-heavy frequencies: the first four words of each cluster carry
    # most of its mass, so they surface as the topic's top terms
    weights = np.array([0.25, 0.2, 0.15, 0.1, 0.08, 0.08, 0.07, 0.07])
    docs = []
    base = date(2020, 1, 10)
    for c, words in enumerate(clusters):
        for i in range(50):
            tokens = []
            for _ in range(40):
                if rng.random() < 0.92:
                    tokens.append(words[int(rng.choice(len(words), p=weights))])
                else:
                    tokens.append(all_terms[int(rng.integers(len(all_terms)))])
            docs.append(
                tdoc(f"c{c}d{i:02d}", tokens, base + timedelta(days=i % 20))
            )
    return docs, clusters


def synthetic_article_records(n_docs=500, seed=23, n_days=60):
    """Raw ingestible article records over a three-cluster vocabulary.

    Bodies mix cluster words, bundled-lexicon sentiment words, and
    stopwords so the full preprocess -> dtm -> sentiment -> lda chain has
    real work to do.
    """
    clusters = [
        [f"health{c}" for c in "abcdefghij"],
        [f"market{c}" for c in "abcdefghij"],
        [f"travel{c}" for c in "abcdefghij"],
    ]
    sentiment_words = ["crisis", "hope", "good", "bad", "fear", "recovery"]
    fillers = ["the", "and", "of", "to", "in"]
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_docs):
        cluster = clusters[int(rng.integers(3))]
        body_tokens = [cluster[int(rng.integers(10))] for _ in range(28)]
        body_tokens += [
            sentiment_words[int(rng.integers(len(sentiment_words)))]
            for _ in range(int(rng.integers(1, 4)))
        ]
        body_tokens += [fillers[int(rng.integers(len(fillers)))] for _ in range(6)]
        order = rng.permutation(len(body_tokens))
        body = " ".join(body_tokens[j] for j in order)
        day = date(2020, 1, 4) + timedelta(days=int(rng.integers(n_days)))
        records.append(
            {
                "id": f"syn-{i:05d}",
                "source": "the-guardian" if i % 2 == 0 else "nytimes",
                "language": "en",
                "published_at": day.isoformat(),
                "title": f"Report {cluster[0]} update",
                "body": body,
            }
        )
    return records


@pytest.fixture
def five_topic_ttm():
    return make_five_topic_ttm()
