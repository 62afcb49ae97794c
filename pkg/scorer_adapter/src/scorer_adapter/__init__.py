"""Batch adapters that run scoring models and emit toolkit-schema files."""

from .manifest import AdapterManifest
from .ops import embed_corpus, perplexity_corpus, score_corpus
from .schemas import ModelError, SchemaError

__version__ = "0.1.0"

__all__ = [
    "AdapterManifest",
    "ModelError",
    "SchemaError",
    "embed_corpus",
    "perplexity_corpus",
    "score_corpus",
]
