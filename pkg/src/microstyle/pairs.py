"""Paraphrase selection and the diversity/fluency gates for pseudo-parallel pairs.

An anchor's best paraphrase is the candidate whose style-score vector lies
furthest from the anchor's by cosine distance. Pairs whose buckets agree in
every style carry no transfer signal and are dropped; sentences failing the
fluency thresholds (perplexity and adversarial score) are dropped before
pairing ever happens.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from ._jsonl import read_objects, require_field, write_objects
from .errors import (
    MalformedLine,
    MissingFluency,
    NoCandidates,
    UnselectedPair,
)
from .records import PairRecord, SentenceRecord, record_index, resolve
from .styles import StyleSpaceConfig, bucket_vector

# Style vectors shorter than this are treated as directionless (similarity 0).
ZERO_NORM = 1e-12

DEFAULT_MAX_PERPLEXITY = 365.0
DEFAULT_MIN_ADVERSARIAL = 0.1


@dataclass(frozen=True)
class FluencyRecord:
    """Per-sentence fluency measurements from an external language model pass."""

    id: str
    perplexity: float
    adversarial: float

    def passes(self, max_perplexity: float, min_adversarial: float) -> bool:
        return self.perplexity < max_perplexity and self.adversarial > min_adversarial


def _style_vector(record: SentenceRecord, config: StyleSpaceConfig) -> list[float]:
    return [record.score_for(style.name) for style in config.styles]


def _style_cosine(a: list[float], b: list[float]) -> float:
    # Cosine over style-score vectors; a degenerate (near-zero) vector has no
    # direction, so its similarity to anything is defined as 0.
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(x * x for x in b))
    if norm_a < ZERO_NORM or norm_b < ZERO_NORM:
        return 0.0
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (norm_a * norm_b)


def select_best_paraphrase(
    pair: PairRecord,
    records: Iterable[SentenceRecord] | Mapping[str, SentenceRecord],
    config: StyleSpaceConfig,
) -> PairRecord:
    """Pick the candidate most stylistically distant from the anchor.

    Distance is 1 - cosine similarity between style-score vectors; ties keep
    the earliest candidate, so upstream candidate ordering is meaningful.
    """
    if not pair.candidate_ids:
        raise NoCandidates(pair.anchor_id)
    index = record_index(records)
    anchor_vec = _style_vector(resolve(index, pair.anchor_id), config)
    best_id = None
    best_distance = -math.inf
    for candidate_id in pair.candidate_ids:
        candidate_vec = _style_vector(resolve(index, candidate_id), config)
        distance = 1.0 - _style_cosine(anchor_vec, candidate_vec)
        if distance > best_distance:
            best_id = candidate_id
            best_distance = distance
    return PairRecord(anchor_id=pair.anchor_id,
                      candidate_ids=pair.candidate_ids,
                      selected_id=best_id)


def diversity_filter(
    pairs: Iterable[PairRecord],
    records: Iterable[SentenceRecord] | Mapping[str, SentenceRecord],
    config: StyleSpaceConfig,
) -> list[PairRecord]:
    """Keep pairs whose anchor and selected paraphrase differ in >= 1 bucket."""
    index = record_index(records)
    kept = []
    for pair in pairs:
        if pair.selected_id is None:
            raise UnselectedPair(pair.anchor_id)
        anchor_buckets = bucket_vector(resolve(index, pair.anchor_id), config)
        selected_buckets = bucket_vector(resolve(index, pair.selected_id), config)
        if anchor_buckets != selected_buckets:
            kept.append(pair)
    return kept


def fluency_filter(
    records: Iterable[SentenceRecord],
    fluency: Mapping[str, FluencyRecord],
    max_perplexity: float = DEFAULT_MAX_PERPLEXITY,
    min_adversarial: float = DEFAULT_MIN_ADVERSARIAL,
) -> list[SentenceRecord]:
    """Keep records strictly under the perplexity bound and over the adversarial bound."""
    kept = []
    for record in records:
        if record.id not in fluency:
            raise MissingFluency(record.id)
        if fluency[record.id].passes(max_perplexity, min_adversarial):
            kept.append(record)
    return kept


def read_fluency(path: str | Path) -> dict[str, FluencyRecord]:
    """Load a fluency file into an id-keyed map, validating ranges."""
    rows: dict[str, FluencyRecord] = {}
    for line_no, obj in read_objects(path):
        rid = require_field(obj, "id", str, line_no, path)
        perplexity = require_field(obj, "perplexity", float, line_no, path)
        adversarial = require_field(obj, "adversarial", float, line_no, path)
        if perplexity <= 0:
            raise MalformedLine(line_no, f"perplexity must be > 0, got {perplexity}", path)
        if not 0.0 <= adversarial <= 1.0:
            raise MalformedLine(line_no, f"adversarial must be in [0, 1], got {adversarial}", path)
        if rid in rows:
            raise MalformedLine(line_no, f"duplicate fluency id {rid!r}", path)
        rows[rid] = FluencyRecord(id=rid, perplexity=perplexity, adversarial=adversarial)
    return rows


def write_fluency(rows: Iterable[FluencyRecord], path: str | Path) -> None:
    write_objects(({"id": row.id, "perplexity": row.perplexity,
                    "adversarial": row.adversarial} for row in rows), path)
