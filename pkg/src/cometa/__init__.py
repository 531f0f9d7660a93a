"""Media-coverage analytics engine.

Ingests article corpora, builds document-term matrices, scores lexicon
sentiment over publication time, projects term co-occurrence and
topic-term networks, and extracts latent topics with collapsed-Gibbs LDA.
"""

__version__ = "0.1.0"
