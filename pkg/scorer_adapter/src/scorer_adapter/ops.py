"""Batch operations: sentences file in, toolkit-schema file out.

Each operation validates its input, computes every row, validates the
rows against the output schema, and only then writes — so a run that
fails for any reason (bad input, unresolvable model) leaves no output
file at all. Output row order always matches input order.
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from .manifest import AdapterManifest, write_manifest
from .schemas import (
    read_sentences,
    validate_embedding_rows,
    validate_fluency_rows,
    validate_score_rows,
    write_rows,
)


def _clip01(value: float) -> float:
    return min(max(float(value), 0.0), 1.0)


def _finish(rows: Sequence[Mapping], out_path: str | Path, backend,
            models: Mapping[str, str], manifest_path: str | Path | None) -> int:
    write_rows(rows, out_path)
    if manifest_path is not None:
        write_manifest(AdapterManifest(backend=backend.name, models=dict(models),
                                       batch_size=backend.batch_size,
                                       device=backend.device), manifest_path)
    return len(rows)


def score_corpus(in_path: str | Path, out_path: str | Path,
                 styles: Sequence[str], models: Mapping[str, str], backend,
                 manifest_path: str | Path | None = None) -> int:
    """Score every sentence on every style; returns the row count.

    Rows use the toolkit's scores-file shape ({"id", "styles": {...}}), so
    the output plugs straight into any of its --scores flags.
    """
    sentences = read_sentences(in_path)
    rows = [{
        "id": sentence["id"],
        "styles": {style: _clip01(backend.style_score(models[style], style,
                                                      sentence["text"]))
                   for style in styles},
    } for sentence in sentences]
    validate_score_rows(rows, styles)
    return _finish(rows, out_path, backend, models, manifest_path)


def embed_corpus(in_path: str | Path, out_path: str | Path, model: str,
                 backend, dim: int = 16,
                 manifest_path: str | Path | None = None) -> int:
    """Embed every sentence; vectors all share one dimension."""
    sentences = read_sentences(in_path)
    rows = [{"id": sentence["id"],
             "vector": backend.embedding(model, sentence["text"], dim)}
            for sentence in sentences]
    validate_embedding_rows(rows)
    return _finish(rows, out_path, backend, {"embedder": model}, manifest_path)


def perplexity_corpus(in_path: str | Path, out_path: str | Path, model: str,
                      adversarial_model: str, backend,
                      manifest_path: str | Path | None = None) -> int:
    """Attach perplexity and adversarial probability to every sentence."""
    sentences = read_sentences(in_path)
    rows = [{"id": sentence["id"],
             "perplexity": float(backend.perplexity(model, sentence["text"])),
             "adversarial": _clip01(backend.adversarial(adversarial_model,
                                                        sentence["text"]))}
            for sentence in sentences]
    validate_fluency_rows(rows)
    return _finish(rows, out_path, backend,
                   {"lm": model, "adversarial": adversarial_model}, manifest_path)
