"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

Each sweep resamples every token's topic from the full conditional

    p(z = k) is proportional to (n_dk + alpha) * (n_kv + beta) / (n_k + V*beta)

where the counts exclude the token being resampled. Topic-word and
document-topic distributions are estimated from counts averaged over
every 10th post-burn-in sweep, smoothed by the priors. All randomness
flows from one explicitly seeded PCG64 generator, so a fixed seed gives
bit-identical models across runs and platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dtm import DocumentTermMatrix
from .errors import ConfigurationError, EmptyCorpusError

SAMPLE_EVERY = 10  # post-burn-in sweeps contributing to the count averages

MODEL_FORMAT = "cometa.lda"
MODEL_VERSION = 1


@dataclass(frozen=True)
class LdaConfig:
    """Sampler settings; alpha defaults to 50/K and beta to 0.01."""

    k: int
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.k)
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigurationError("alpha and beta must be positive")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if not (0 <= self.burn_in < self.iterations):
            raise ConfigurationError("burn_in must satisfy 0 <= burn_in < iterations")
        if not (-(2**63) <= self.seed < 2**64):
            raise ConfigurationError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "LdaConfig":
        return cls(
            k=raw["k"],
            alpha=raw.get("alpha"),
            beta=raw.get("beta", 0.01),
            iterations=raw.get("iterations", 1000),
            burn_in=raw.get("burn_in", 200),
            seed=raw.get("seed", 0),
        )


@dataclass(frozen=True)
class LdaModel:
    """Fitted model: row-stochastic phi (K x V) and theta (D x K)."""

    phi: np.ndarray
    theta: np.ndarray
    assignments: tuple[tuple[int, ...], ...]
    config: LdaConfig
    vocab: tuple[str, ...]
    doc_ids: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.config.k


@dataclass(frozen=True)
class TermTopicMatrix:
    """Per-topic top terms with their phi weights (the terms-topics matrix)."""

    topics: tuple[int, ...]
    terms: tuple[str, ...]
    weight: dict[tuple[str, int], float]

    def terms_of(self, topic: int) -> list[str]:
        return [t for t in self.terms if (t, topic) in self.weight]

    def topics_of(self, term: str) -> list[int]:
        return [k for k in self.topics if (term, k) in self.weight]


class SamplerState:
    """Read-only view of the sampler counts, handed to sweep callbacks."""

    def __init__(self, n_dk, n_kv, n_k, doc_lengths):
        self.n_dk = n_dk
        self.n_kv = n_kv
        self.n_k = n_k
        self.doc_lengths = doc_lengths


def fit_lda(
    dtm: DocumentTermMatrix,
    config: LdaConfig,
    on_sweep: Callable[[int, SamplerState], None] | None = None,
) -> LdaModel:
    """Fit LDA on the DTM counts by collapsed Gibbs sampling.

    Documents with zero tokens contribute nothing to sampling and end up
    with a uniform topic mixture. `on_sweep(sweep, state)` is invoked
    after each full sweep, mainly for diagnostics.
    """
    k = config.k
    vsize = dtm.n_terms
    if k > vsize:
        raise ConfigurationError(f"k={k} exceeds vocabulary size {vsize}")

    # expand the sparse rows into flat token streams (order is irrelevant
    # to the exchangeable model; vocabulary order keeps it deterministic)
    doc_of_token: list[int] = []
    term_of_token: list[int] = []
    doc_lengths: list[int] = []
    matrix = dtm.counts
    for d in range(dtm.n_docs):
        start, end = matrix.indptr[d], matrix.indptr[d + 1]
        length = 0
        for v, c in sorted(
            zip(matrix.indices[start:end].tolist(), matrix.data[start:end].tolist())
        ):
            doc_of_token.extend([d] * c)
            term_of_token.extend([v] * c)
            length += c
        doc_lengths.append(length)
    n_tokens = len(doc_of_token)
    if n_tokens == 0:
        raise EmptyCorpusError("no tokens to sample; the matrix is all zeros")

    alpha = config.alpha
    beta = config.beta
    v_beta = vsize * beta
    rng = np.random.default_rng(config.seed)

    z = rng.integers(0, k, n_tokens).tolist()
    n_dk = [[0] * k for _ in range(dtm.n_docs)]
    n_kv = [[0] * vsize for _ in range(k)]
    n_k = [0] * k
    for t in range(n_tokens):
        d, v, topic = doc_of_token[t], term_of_token[t], z[t]
        n_dk[d][topic] += 1
        n_kv[topic][v] += 1
        n_k[topic] += 1

    n_dk_acc = np.zeros((dtm.n_docs, k))
    n_kv_acc = np.zeros((k, vsize))
    n_samples = 0
    topic_range = range(k)

    for sweep in range(1, config.iterations + 1):
        uniforms = rng.random(n_tokens).tolist()
        for t in range(n_tokens):
            d = doc_of_token[t]
            v = term_of_token[t]
            topic = z[t]
            doc_row = n_dk[d]
            doc_row[topic] -= 1
            n_kv[topic][v] -= 1
            n_k[topic] -= 1
            total = 0.0
            cumulative = []
            for kk in topic_range:
                total += (
                    (doc_row[kk] + alpha)
                    * (n_kv[kk][v] + beta)
                    / (n_k[kk] + v_beta)
                )
                cumulative.append(total)
            u = uniforms[t] * total
            topic = 0
            while cumulative[topic] < u:
                topic += 1
            z[t] = topic
            doc_row[topic] += 1
            n_kv[topic][v] += 1
            n_k[topic] += 1
        if on_sweep is not None:
            on_sweep(sweep, SamplerState(n_dk, n_kv, n_k, doc_lengths))
        if sweep > config.burn_in and (sweep - config.burn_in) % SAMPLE_EVERY == 0:
            n_dk_acc += np.asarray(n_dk)
            n_kv_acc += np.asarray(n_kv)
            n_samples += 1

    if n_samples == 0:  # short chains: fall back to the final sweep
        n_dk_acc = np.asarray(n_dk, dtype=float)
        n_kv_acc = np.asarray(n_kv, dtype=float)
        n_samples = 1

    mean_dk = n_dk_acc / n_samples
    mean_kv = n_kv_acc / n_samples
    phi = (mean_kv + beta) / (mean_kv.sum(axis=1, keepdims=True) + v_beta)
    lengths = np.asarray(doc_lengths, dtype=float).reshape(-1, 1)
    theta = (mean_dk + alpha) / (lengths + k * alpha)

    assignments: list[tuple[int, ...]] = []
    cursor = 0
    for length in doc_lengths:
        assignments.append(tuple(z[cursor : cursor + length]))
        cursor += length

    return LdaModel(
        phi=phi,
        theta=theta,
        assignments=tuple(assignments),
        config=config,
        vocab=dtm.vocabulary,
        doc_ids=dtm.doc_ids,
    )


def top_terms_per_topic(model: LdaModel, n: int = 20) -> TermTopicMatrix:
    """The n terms most associated with each topic, ties broken alphabetically."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    weight: dict[tuple[str, int], float] = {}
    selected_terms: list[str] = []
    seen = set()
    for k in range(model.k):
        row = model.phi[k]
        ranked = sorted(
            range(len(model.vocab)), key=lambda v: (-row[v], model.vocab[v])
        )[: min(n, len(model.vocab))]
        for v in ranked:
            term = model.vocab[v]
            weight[(term, k)] = float(row[v])
            if term not in seen:
                seen.add(term)
                selected_terms.append(term)
    return TermTopicMatrix(
        topics=tuple(range(model.k)),
        terms=tuple(sorted(selected_terms)),
        weight=weight,
    )


def doc_topic(model: LdaModel, doc_index: int) -> np.ndarray:
    """Topic mixture of one document (a copy of the theta row)."""
    if not (0 <= doc_index < model.theta.shape[0]):
        raise IndexError(f"document index {doc_index} out of range")
    return model.theta[doc_index].copy()


def log_likelihood(model: LdaModel, dtm: DocumentTermMatrix) -> float:
    """Token log likelihood sum(count * log(theta_d . phi_v)) over the DTM."""
    if model.vocab != dtm.vocabulary:
        raise ConfigurationError("model and matrix vocabularies differ")
    if len(model.doc_ids) != dtm.n_docs:
        raise ConfigurationError("model and matrix document sets differ")
    mixture = model.theta @ model.phi  # D x V
    coo = dtm.counts.tocoo()
    return float(
        np.sum(coo.data * np.log(mixture[coo.row, coo.col]))
    )


# -- persistence -------------------------------------------------------------


def model_to_bytes(model: LdaModel, include_assignments: bool = True) -> bytes:
    """Canonical JSON container; equal models serialize to equal bytes."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "config": model.config.to_dict(),
        "doc_ids": list(model.doc_ids),
        "vocab": list(model.vocab),
        "phi": [[float(x) for x in row] for row in model.phi],
        "theta": [[float(x) for x in row] for row in model.theta],
        "assignments": [list(doc) for doc in model.assignments]
        if include_assignments
        else None,
    }
    return json.dumps(
        payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def save_model(model: LdaModel, path: str, include_assignments: bool = True) -> str:
    with open(path, "wb") as fh:
        fh.write(model_to_bytes(model, include_assignments))
    return path


def load_model(path: str) -> LdaModel:
    with open(path, "rb") as fh:
        payload = json.loads(fh.read().decode("utf-8"))
    if payload.get("format") != MODEL_FORMAT:
        raise ConfigurationError(f"{path} is not a saved LDA model")
    if payload.get("version") != MODEL_VERSION:
        raise ConfigurationError(f"unsupported model version {payload.get('version')}")
    assignments = payload.get("assignments")
    return LdaModel(
        phi=np.asarray(payload["phi"], dtype=float),
        theta=np.asarray(payload["theta"], dtype=float),
        assignments=tuple(tuple(doc) for doc in assignments)
        if assignments is not None
        else tuple(),
        config=LdaConfig.from_dict(payload["config"]),
        vocab=tuple(payload["vocab"]),
        doc_ids=tuple(payload["doc_ids"]),
    )
