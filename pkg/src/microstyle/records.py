"""Core record types, corpus file ingestion, and dataset manifests."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

from ._jsonl import read_objects, require_field, write_objects
from .errors import (
    DuplicateId,
    EmptyText,
    MalformedLine,
    MissingScore,
    ScoreOutOfRange,
    UnknownId,
    UnscoredRecord,
)

if TYPE_CHECKING:
    from .styles import StyleSpaceConfig


@dataclass(frozen=True)
class SentenceRecord:
    """One corpus sentence; ``scores`` maps micro-style name to a value in [0, 1]."""

    id: str
    text: str
    scores: dict[str, float] | None = None

    def score_for(self, style: str) -> float:
        if self.scores is None or style not in self.scores:
            raise UnscoredRecord(self.id, style)
        return self.scores[style]


@dataclass(frozen=True)
class PairRecord:
    """An anchor sentence with its ordered paraphrase candidates."""

    anchor_id: str
    candidate_ids: tuple[str, ...]
    selected_id: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    """Summary of one dataset file: per-combination counts plus provenance."""

    corpus_name: str
    micro_styles: tuple[str, ...]
    record_count: int
    per_combination_counts: dict[str, int]
    seed: int
    mode: str
    std_dev_of_counts: float

    def validate(self) -> None:
        if sum(self.per_combination_counts.values()) != self.record_count:
            raise ValueError("per_combination_counts do not sum to record_count")
        if self.mode not in ("raw", "balanced", "skewed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "balanced" and self.std_dev_of_counts != 0.0:
            raise ValueError("balanced manifest must have std_dev_of_counts == 0")


def _validate_score_map(raw: object, record_id: str, line_no: int, path: str) -> dict[str, float]:
    if not isinstance(raw, dict):
        raise MalformedLine(line_no, "field 'scores' is not an object", path)
    scores: dict[str, float] = {}
    for style, value in raw.items():
        if not isinstance(style, str):
            raise MalformedLine(line_no, "score key is not a string", path)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise MalformedLine(line_no, f"score for {style!r} is not a number", path)
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ScoreOutOfRange(record_id, style, value)
        scores[style] = value
    return scores


def ingest_sentences(path: str | Path, allow_duplicates: bool = False) -> list[SentenceRecord]:
    """Read a sentences file strictly, preserving file order.

    Raises MalformedLine / DuplicateId / EmptyText; errors abort the ingest
    so a bad corpus never propagates downstream. ``allow_duplicates`` admits
    repeated ids — sampled-with-replacement outputs are multisets, not corpora.
    """
    records: list[SentenceRecord] = []
    seen: set[str] = set()
    for line_no, obj in read_objects(path):
        record_id = require_field(obj, "id", str, line_no, str(path))
        if not record_id:
            raise MalformedLine(line_no, "field 'id' is empty", str(path))
        text = require_field(obj, "text", str, line_no, str(path))
        if record_id in seen and not allow_duplicates:
            raise DuplicateId(record_id)
        seen.add(record_id)
        text = text.strip()
        if not text:
            raise EmptyText(record_id)
        scores = None
        if "scores" in obj:
            scores = _validate_score_map(obj["scores"], record_id, line_no, str(path))
        records.append(SentenceRecord(id=record_id, text=text, scores=scores))
    return records


def write_sentences(records: Iterable[SentenceRecord], path: str | Path) -> None:
    def rows():
        for record in records:
            row: dict = {"id": record.id, "text": record.text}
            if record.scores is not None:
                row["scores"] = record.scores
            yield row

    write_objects(rows(), path)


def read_score_rows(path: str | Path) -> dict[str, dict[str, float]]:
    """Read a scores file into an id-keyed map; duplicate ids are rejected."""
    rows: dict[str, dict[str, float]] = {}
    for line_no, obj in read_objects(path):
        record_id = require_field(obj, "id", str, line_no, str(path))
        styles = require_field(obj, "styles", dict, line_no, str(path))
        if record_id in rows:
            raise DuplicateId(record_id)
        rows[record_id] = _validate_score_map(styles, record_id, line_no, str(path))
    return rows


def write_score_rows(records: Iterable[SentenceRecord], path: str | Path) -> None:
    """Write each record's score map as one id-keyed scores row."""
    write_objects(({"id": record.id, "styles": dict(record.scores or {})}
                   for record in records), path)


def attach_scores(
    records: Iterable[SentenceRecord],
    score_path: str | Path,
    required_styles: Iterable[str],
) -> tuple[list[SentenceRecord], list[MissingScore]]:
    """Join score rows onto records by id.

    The join is lenient-with-report: records missing a row, or missing one of
    the required styles, are excluded from the result and returned as
    MissingScore entries instead of aborting the join. Out-of-range values do
    abort (corrupt data, not partial coverage).
    """
    required = list(required_styles)
    if not required:
        raise ValueError("required_styles must be non-empty")
    rows = read_score_rows(score_path)
    scored: list[SentenceRecord] = []
    report: list[MissingScore] = []
    for record in records:
        row = rows.get(record.id, {})
        merged = dict(record.scores or {})
        merged.update(row)
        holes = [style for style in required if style not in merged]
        if holes:
            report.extend(MissingScore(record.id, style) for style in holes)
            continue
        scored.append(SentenceRecord(id=record.id, text=record.text, scores=merged))
    return scored, report


def population_std(counts: Iterable[int]) -> float:
    """Population standard deviation; exact integer arithmetic up to the final division."""
    values = list(counts)
    n = len(values)
    if n == 0:
        return 0.0
    numerator = n * sum(v * v for v in values) - sum(values) ** 2
    return math.sqrt(numerator) / n


def write_manifest(
    records: Iterable[SentenceRecord],
    config: "StyleSpaceConfig",
    mode: str,
    seed: int,
    corpus_name: str,
    path: str | Path | None = None,
) -> DatasetManifest:
    """Build (and optionally write) the manifest for a record list."""
    from .distribution import tally

    counts = tally(records, config)
    manifest = DatasetManifest(
        corpus_name=corpus_name,
        micro_styles=tuple(config.names),
        record_count=sum(counts.values()),
        per_combination_counts=counts,
        seed=seed,
        mode=mode,
        std_dev_of_counts=population_std(counts.values()),
    )
    manifest.validate()
    if path is not None:
        save_manifest(manifest, path)
    return manifest


def manifest_to_dict(manifest: DatasetManifest) -> dict:
    return {
        "corpus_name": manifest.corpus_name,
        "micro_styles": list(manifest.micro_styles),
        "record_count": manifest.record_count,
        "per_combination_counts": dict(manifest.per_combination_counts),
        "seed": manifest.seed,
        "mode": manifest.mode,
        "std_dev_of_counts": manifest.std_dev_of_counts,
    }


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(manifest_to_dict(manifest), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_manifest(path: str | Path) -> DatasetManifest:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    manifest = DatasetManifest(
        corpus_name=data["corpus_name"],
        micro_styles=tuple(data["micro_styles"]),
        record_count=data["record_count"],
        per_combination_counts=dict(data["per_combination_counts"]),
        seed=data["seed"],
        mode=data["mode"],
        std_dev_of_counts=data["std_dev_of_counts"],
    )
    manifest.validate()
    return manifest


def read_pairs(path: str | Path) -> list[PairRecord]:
    pairs: list[PairRecord] = []
    seen: set[str] = set()
    for line_no, obj in read_objects(path):
        anchor_id = require_field(obj, "anchor_id", str, line_no, str(path))
        candidates = require_field(obj, "candidate_ids", list, line_no, str(path))
        if not all(isinstance(c, str) for c in candidates):
            raise MalformedLine(line_no, "candidate_ids must be strings", str(path))
        if anchor_id in seen:
            raise DuplicateId(anchor_id)
        seen.add(anchor_id)
        selected = obj.get("selected_id")
        if selected is not None and not isinstance(selected, str):
            raise MalformedLine(line_no, "selected_id must be a string", str(path))
        if selected is not None and selected not in candidates:
            raise MalformedLine(line_no, "selected_id not among candidate_ids", str(path))
        pairs.append(PairRecord(anchor_id=anchor_id,
                                candidate_ids=tuple(candidates),
                                selected_id=selected))
    return pairs


def write_pairs(pairs: Iterable[PairRecord], path: str | Path) -> None:
    def rows():
        for pair in pairs:
            row: dict = {"anchor_id": pair.anchor_id,
                         "candidate_ids": list(pair.candidate_ids)}
            if pair.selected_id is not None:
                row["selected_id"] = pair.selected_id
            yield row

    write_objects(rows(), path)


def record_index(records: Iterable[SentenceRecord] | Mapping[str, SentenceRecord]) -> dict[str, SentenceRecord]:
    """Normalize a record collection to an id-keyed mapping."""
    if isinstance(records, Mapping):
        return dict(records)
    return {record.id: record for record in records}


def resolve(index: Mapping[str, SentenceRecord], record_id: str) -> SentenceRecord:
    """Look up a record by id, raising UnknownId instead of KeyError."""
    try:
        return index[record_id]
    except KeyError:
        raise UnknownId(record_id) from None
