"""Scorer contract plus the deterministic heuristic scorers.

The heuristics are stand-ins for trained per-style classifiers: deliberately
simple, formula-published, and computed in integer tenths so every example
value is exact decimal arithmetic rather than accumulated float error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import EmptyText, UnknownStyle
from .records import SentenceRecord, read_score_rows

# A contraction is a word-internal apostrophe between letters; both the ASCII
# apostrophe and U+2019 count.
_CONTRACTION_RE = re.compile(r"[A-Za-z]['’](?=[A-Za-z])")
_WORD_RE = re.compile(r"[a-z'’]+")


@dataclass(frozen=True)
class ScorerSpec:
    """A producer of per-style scores in [0, 1]."""

    name: str
    styles_produced: tuple[str, ...]
    kind: str  # "heuristic" or "external-file"

    def __post_init__(self):
        if self.kind not in ("heuristic", "external-file"):
            raise ValueError(f"unknown scorer kind {self.kind!r}")


def _clamp_tenths(tenths: int) -> float:
    return min(max(tenths, 0), 10) / 10.0


def score_formality_heuristic(text: str) -> float:
    """clamp01(0.8 - 0.2*contractions - 0.1*exclamations), exact in tenths."""
    if not text.strip():
        raise EmptyText()
    contractions = len(_CONTRACTION_RE.findall(text))
    exclamations = text.count("!")
    return _clamp_tenths(8 - 2 * contractions - exclamations)


def score_arousal_heuristic(text: str, lexicon: frozenset[str] = frozenset()) -> float:
    """clamp01(0.2 + 0.2*'!' + 0.1*'?' + 0.1*lexicon hits), exact in tenths."""
    if not text.strip():
        raise EmptyText()
    exclamations = text.count("!")
    questions = text.count("?")
    hits = sum(1 for token in _WORD_RE.findall(text.lower()) if token in lexicon)
    return _clamp_tenths(2 + 2 * exclamations + questions + hits)


HEURISTIC_STYLES = ("formality", "arousal")


def score_records(
    records: Iterable[SentenceRecord],
    styles: Iterable[str],
    lexicon: frozenset[str] = frozenset(),
) -> list[SentenceRecord]:
    """Attach heuristic scores for the requested styles to every record."""
    styles = list(styles)
    for style in styles:
        if style not in HEURISTIC_STYLES:
            raise UnknownStyle(style)
    scored = []
    for record in records:
        values = dict(record.scores or {})
        for style in styles:
            if style == "formality":
                values[style] = score_formality_heuristic(record.text)
            else:
                values[style] = score_arousal_heuristic(record.text, lexicon)
        scored.append(SentenceRecord(id=record.id, text=record.text, scores=values))
    return scored


def load_lexicon(path: str | Path) -> frozenset[str]:
    """Arousal lexicon: one lowercase word per line, blanks ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


def load_external_scores(spec: ScorerSpec, path: str | Path) -> dict[str, dict[str, float]]:
    """Read an external scorer's output file, validated against its ScorerSpec.

    Range validation happens during the file read; this adds the check that
    every style in the file is one the scorer claims to produce.
    """
    if spec.kind != "external-file":
        raise ValueError(f"scorer {spec.name!r} is not an external-file scorer")
    produced = set(spec.styles_produced)
    rows = read_score_rows(path)
    for styles in rows.values():
        for style in styles:
            if style not in produced:
                raise UnknownStyle(style)
    return rows
