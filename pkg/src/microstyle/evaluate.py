"""Evaluation suite for style-transferred output.

Success is exact: a transfer counts only when the measured bucket vector
matches the intended one in every configured style. Text-similarity metrics
(corpus BLEU, embedding cosine, Word Mover's Distance) and fluency means are
aggregated overall and per intended style combination, mirroring how training
subsets are keyed.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._jsonl import read_objects, require_field, write_objects
from .errors import (
    DimensionMismatch,
    EmptyAfterFilter,
    EmptyCorpus,
    EmptyInput,
    LengthMismatch,
    MalformedLine,
    MissingFluency,
    MissingMetric,
    StyleMismatch,
    UnknownId,
    UnscoredRecord,
    ZeroVector,
)
from .kernels import transport_cost
from .pairs import FluencyRecord
from .records import SentenceRecord
from .styles import (
    Bucket,
    StyleSpaceConfig,
    bucket_of,
    combination_of_buckets,
    enumerate_combinations,
)

logger = logging.getLogger(__name__)

ZERO_NORM = 1e-12

# Characters peeled off token tails before BLEU/WMD comparison.
_TRAILING_PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~’“”")


@dataclass(frozen=True)
class TransferredRecord:
    """One style-transferred sentence with its intended bucket targets."""

    id: str
    source_id: str
    text: str
    intended_buckets: dict[str, Bucket]
    measured_scores: dict[str, float] | None = None
    reference: str | None = None

    def measured_bucket(self, style: str) -> Bucket:
        if self.measured_scores is None or style not in self.measured_scores:
            raise UnscoredRecord(self.id, style)
        return bucket_of(self.measured_scores[style])


@dataclass(frozen=True)
class EvalReport:
    """Corpus-level metric summary plus per-combination breakdown."""

    s_c: float
    per_style_match: dict[str, float]
    bleu: float | None
    mean_cosine: float | None
    mean_wmd: float | None
    mean_perplexity: float | None
    mean_adversarial: float | None
    per_combination: dict[str, dict[str, float]]


def tokenize(text: str) -> list[str]:
    """Lowercase whitespace tokens with trailing punctuation split off."""
    tokens = []
    for chunk in text.lower().split():
        tail = []
        while chunk and chunk[-1] in _TRAILING_PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def success_ratio(records: Sequence[TransferredRecord], config: StyleSpaceConfig) -> float:
    """Fraction of records whose measured buckets match intended in every style."""
    if not records:
        raise EmptyInput("transferred records")
    matches = 0
    for record in records:
        if all(record.measured_bucket(name) == record.intended_buckets[name]
               for name in config.names):
            matches += 1
    return matches / len(records)


def style_match_rates(records: Sequence[TransferredRecord],
                      config: StyleSpaceConfig) -> dict[str, float]:
    """Per-style fraction of records whose measured bucket matches intended."""
    if not records:
        raise EmptyInput("transferred records")
    rates = {}
    for name in config.names:
        hit = sum(1 for record in records
                  if record.measured_bucket(name) == record.intended_buckets[name])
        rates[name] = hit / len(records)
    return rates


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidates: Sequence[Sequence[str]], references: Sequence[Sequence[str]],
         max_n: int = 4) -> float:
    """Corpus BLEU: clipped n-gram precisions, geometric mean, brevity penalty.

    Unsmoothed — any empty precision level sends the whole score to 0.
    """
    if len(candidates) != len(references):
        raise LengthMismatch(len(candidates), len(references))
    if not candidates:
        raise EmptyCorpus()
    cand_len = sum(len(c) for c in candidates)
    ref_len = sum(len(r) for r in references)
    log_sum = 0.0
    for n in range(1, max_n + 1):
        matched = 0
        total = 0
        for cand, ref in zip(candidates, references):
            cand_counts = _ngram_counts(cand, n)
            ref_counts = _ngram_counts(ref, n)
            matched += sum(min(count, ref_counts[gram])
                           for gram, count in cand_counts.items())
            total += max(len(cand) - n + 1, 0)
        if matched == 0 or total == 0:
            return 0.0
        log_sum += math.log(matched / total)
    brevity = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len)
    return brevity * math.exp(log_sum / max_n)


def sentence_bleu_smoothed(candidate: Sequence[str], reference: Sequence[str],
                           max_n: int = 4) -> float:
    """Diagnostic per-sentence BLEU with add-one smoothing on n > 1 precisions.

    Unigram precision stays unsmoothed, so candidates sharing no words with
    the reference still score 0.
    """
    if not candidate:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand_counts = _ngram_counts(candidate, n)
        ref_counts = _ngram_counts(reference, n)
        matched = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        total = max(len(candidate) - n + 1, 0)
        if n > 1:
            matched += 1
            total += 1
        if matched == 0 or total == 0:
            return 0.0
        log_sum += math.log(matched / total)
    ref_len = len(reference)
    cand_len = len(candidate)
    brevity = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len)
    return brevity * math.exp(log_sum / max_n)


def cosine_similarity(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    vec_a = np.asarray(a, dtype=np.float64)
    vec_b = np.asarray(b, dtype=np.float64)
    if vec_a.shape != vec_b.shape or vec_a.ndim != 1 or vec_a.size == 0:
        raise DimensionMismatch(vec_a.size, vec_b.size)
    norm_a = float(np.linalg.norm(vec_a))
    norm_b = float(np.linalg.norm(vec_b))
    if norm_a < ZERO_NORM or norm_b < ZERO_NORM:
        raise ZeroVector()
    return float(vec_a @ vec_b) / (norm_a * norm_b)


def _bag(tokens: Sequence[str], embeddings: Mapping[str, np.ndarray],
         side: str) -> tuple[list[str], np.ndarray]:
    kept = [t for t in tokens if t in embeddings]
    if not kept:
        raise EmptyAfterFilter(side)
    vocab = sorted(set(kept))
    counts = Counter(kept)
    weights = np.array([counts[t] / len(kept) for t in vocab])
    return vocab, weights


def wmd(tokens_a: Sequence[str], tokens_b: Sequence[str],
        embeddings: Mapping[str, np.ndarray]) -> float:
    """Exact earth-mover's distance between normalized bags of word vectors."""
    vocab_a, weights_a = _bag(tokens_a, embeddings, "left")
    vocab_b, weights_b = _bag(tokens_b, embeddings, "right")
    mat_a = np.stack([np.asarray(embeddings[t], dtype=np.float64) for t in vocab_a])
    mat_b = np.stack([np.asarray(embeddings[t], dtype=np.float64) for t in vocab_b])
    if mat_a.shape[1] != mat_b.shape[1]:
        raise DimensionMismatch(mat_a.shape[1], mat_b.shape[1])
    cost = np.linalg.norm(mat_a[:, None, :] - mat_b[None, :, :], axis=2)
    return transport_cost(weights_a, weights_b, cost)


def aggregate_by_combination(
    records: Sequence[TransferredRecord],
    metrics: Mapping[str, Mapping[str, float]],
    config: StyleSpaceConfig,
) -> dict[str, dict[str, float]]:
    """Mean of each per-record metric within each intended combination."""
    groups: dict[str, list[Mapping[str, float]]] = {}
    for record in records:
        if record.id not in metrics:
            raise MissingMetric(record.id)
        key = combination_of_buckets(record.intended_buckets, config)
        groups.setdefault(key, []).append(metrics[record.id])
    empty = [key for key in enumerate_combinations(config) if key not in groups]
    if empty:
        logger.info("omitting combinations with no records: %s", ", ".join(empty))
    report = {}
    for key, rows in groups.items():
        names = sorted(rows[0])
        report[key] = {name: sum(row[name] for row in rows) / len(rows)
                       for name in names}
    return report


def representation_report(records: Sequence[TransferredRecord],
                          config: StyleSpaceConfig) -> dict[str, float]:
    """Percentage of records landing in each measured combination."""
    if not records:
        raise EmptyInput("transferred records")
    counts = {key: 0 for key in enumerate_combinations(config)}
    for record in records:
        if record.measured_scores is None:
            raise UnscoredRecord(record.id)
        buckets = {name: record.measured_bucket(name) for name in config.names}
        counts[combination_of_buckets(buckets, config)] += 1
    return {key: 100.0 * count / len(records) for key, count in counts.items()}


def build_eval_report(
    records: Sequence[TransferredRecord],
    config: StyleSpaceConfig,
    sources: Mapping[str, SentenceRecord],
    token_embeddings: Mapping[str, np.ndarray] | None = None,
    sentence_embeddings: Mapping[str, np.ndarray] | None = None,
    fluency: Mapping[str, FluencyRecord] | None = None,
    bleu_against: str = "source",
) -> EvalReport:
    """Assemble the full report from whichever metric inputs are present.

    ``bleu_against`` picks the BLEU reference text: "source" compares against
    each record's source sentence, "reference" against the record's own
    reference field.
    """
    if bleu_against not in ("source", "reference"):
        raise ValueError(f"bleu_against must be 'source' or 'reference', got {bleu_against!r}")
    if not records:
        raise EmptyInput("transferred records")

    def reference_text(record: TransferredRecord) -> str:
        if bleu_against == "reference":
            if record.reference is None:
                raise MissingMetric(record.id)
            return record.reference
        if record.source_id not in sources:
            raise UnknownId(record.source_id)
        return sources[record.source_id].text

    candidates = [tokenize(record.text) for record in records]
    references = [tokenize(reference_text(record)) for record in records]
    corpus_bleu = bleu(candidates, references)

    per_record: dict[str, dict[str, float]] = {record.id: {} for record in records}
    for record, cand, ref in zip(records, candidates, references):
        per_record[record.id]["bleu"] = sentence_bleu_smoothed(cand, ref)
    if sentence_embeddings is not None:
        for record in records:
            for needed in (record.id, record.source_id):
                if needed not in sentence_embeddings:
                    raise MissingMetric(needed)
            per_record[record.id]["cosine"] = cosine_similarity(
                sentence_embeddings[record.source_id], sentence_embeddings[record.id])
    if token_embeddings is not None:
        for record, cand, ref in zip(records, candidates, references):
            per_record[record.id]["wmd"] = wmd(ref, cand, token_embeddings)
    if fluency is not None:
        for record in records:
            if record.id not in fluency:
                raise MissingFluency(record.id)
            per_record[record.id]["perplexity"] = fluency[record.id].perplexity
            per_record[record.id]["adversarial"] = fluency[record.id].adversarial

    def mean_of(name: str) -> float | None:
        values = [row[name] for row in per_record.values() if name in row]
        if not values:
            return None
        return sum(values) / len(values)

    per_combination = aggregate_by_combination(records, per_record, config)
    by_key: dict[str, list[TransferredRecord]] = {}
    for record in records:
        key = combination_of_buckets(record.intended_buckets, config)
        by_key.setdefault(key, []).append(record)
    for key, group in by_key.items():
        per_combination[key]["s_c"] = success_ratio(group, config)
        per_combination[key]["count"] = float(len(group))

    return EvalReport(
        s_c=success_ratio(records, config),
        per_style_match=style_match_rates(records, config),
        bleu=corpus_bleu,
        mean_cosine=mean_of("cosine"),
        mean_wmd=mean_of("wmd"),
        mean_perplexity=mean_of("perplexity"),
        mean_adversarial=mean_of("adversarial"),
        per_combination=per_combination,
    )


def report_to_dict(report: EvalReport) -> dict:
    return {
        "s_c": report.s_c,
        "per_style_match": dict(report.per_style_match),
        "bleu": report.bleu,
        "mean_cosine": report.mean_cosine,
        "mean_wmd": report.mean_wmd,
        "mean_perplexity": report.mean_perplexity,
        "mean_adversarial": report.mean_adversarial,
        "per_combination": {key: dict(row)
                            for key, row in sorted(report.per_combination.items())},
    }


def save_report(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report_to_dict(report), indent=2) + "\n",
                          encoding="utf-8")


def write_report_csv(per_combination: Mapping[str, Mapping[str, float]],
                     path: str | Path,
                     representation: Mapping[str, float] | None = None) -> None:
    """Flat combination,metric,value rows for plotting."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["combination", "metric", "value"])
        for key in sorted(per_combination):
            for name in sorted(per_combination[key]):
                writer.writerow([key, name, per_combination[key][name]])
        if representation is not None:
            for key in sorted(representation):
                writer.writerow([key, "representation_pct", representation[key]])


def read_transferred(path: str | Path, config: StyleSpaceConfig) -> list[TransferredRecord]:
    """Load a transferred file; intended bucket tokens must cover the config."""
    records = []
    for line_no, obj in read_objects(path):
        rid = require_field(obj, "id", str, line_no, path)
        source_id = require_field(obj, "source_id", str, line_no, path)
        text = require_field(obj, "text", str, line_no, path)
        intended_raw = require_field(obj, "intended", dict, line_no, path)
        if set(intended_raw) != set(config.names):
            raise StyleMismatch(list(config.names), sorted(intended_raw))
        intended = {name: Bucket.from_token(token) for name, token in intended_raw.items()}
        scores = obj.get("scores")
        if scores is not None:
            scores = {str(k): float(v) for k, v in scores.items()}
        reference = obj.get("reference")
        records.append(TransferredRecord(id=rid, source_id=source_id, text=text,
                                         intended_buckets=intended,
                                         measured_scores=scores,
                                         reference=reference))
    return records


def write_transferred(records: Iterable[TransferredRecord], path: str | Path) -> None:
    def rows():
        for record in records:
            row: dict = {
                "id": record.id,
                "source_id": record.source_id,
                "text": record.text,
                "intended": {name: bucket.token
                             for name, bucket in record.intended_buckets.items()},
            }
            if record.measured_scores is not None:
                row["scores"] = dict(record.measured_scores)
            if record.reference is not None:
                row["reference"] = record.reference
            yield row

    write_objects(rows(), path)


def with_measured_scores(record: TransferredRecord,
                         scores: Mapping[str, float]) -> TransferredRecord:
    return replace(record, measured_scores=dict(scores))


def read_embeddings(path: str | Path) -> dict[str, np.ndarray]:
    """Load a key -> vector file (keys are sentence ids or tokens)."""
    vectors: dict[str, np.ndarray] = {}
    dim = None
    for line_no, obj in read_objects(path):
        key = obj.get("id", obj.get("token"))
        if not isinstance(key, str) or not key:
            raise MalformedLine(line_no, "missing id/token field", path)
        raw = obj.get("vector")
        if not isinstance(raw, list) or not raw:
            raise MalformedLine(line_no, "missing or empty vector field", path)
        vec = np.asarray([float(x) for x in raw], dtype=np.float64)
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise DimensionMismatch(dim, vec.size)
        vectors[key] = vec
    return vectors


def write_embeddings(vectors: Mapping[str, np.ndarray], path: str | Path,
                     key_field: str = "id") -> None:
    write_objects(({key_field: key, "vector": [float(x) for x in vec]}
                   for key, vec in vectors.items()), path)
