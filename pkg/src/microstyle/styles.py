"""Style intensity buckets, binary joint combinations, and the combination space."""
from __future__ import annotations

import enum
import itertools
import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

from .errors import NonBinaryStyle, ScoreOutOfRange, UnscoredRecord

if TYPE_CHECKING:
    from .records import SentenceRecord


class Bucket(enum.IntEnum):
    """Five intensity levels; the integer order is the intensity order."""

    VERY_LOW = 0
    LOW = 1
    MID = 2
    HIGH = 3
    VERY_HIGH = 4

    @property
    def token(self) -> str:
        return _BUCKET_TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> "Bucket":
        key = token.strip().lower().replace("_", " ")
        try:
            return _TOKEN_BUCKETS[key]
        except KeyError:
            raise ValueError(f"unknown bucket token {token!r}") from None


_BUCKET_TOKENS = {
    Bucket.VERY_LOW: "very low",
    Bucket.LOW: "low",
    Bucket.MID: "mid",
    Bucket.HIGH: "high",
    Bucket.VERY_HIGH: "very high",
}
_TOKEN_BUCKETS = {token: bucket for bucket, token in _BUCKET_TOKENS.items()}

# Interior boundaries of the five buckets. Intervals are left-closed /
# right-open, except the last which is closed at 1.0, so shared endpoints
# belong to the upper bucket.
BUCKET_EDGES = (0.2, 0.4, 0.6, 0.95)

# Canonical single-character state codes, (high, low) per style.
DEFAULT_STATE_CODES: dict[str, tuple[str, str]] = {
    "formality": ("f", "i"),
    "bias": ("b", "u"),
    "arousal": ("e", "n"),
    "sentiment": ("p", "n"),
}


@dataclass(frozen=True)
class StyleDef:
    """One micro-style: its name and ordered state codes (high state first)."""

    name: str
    codes: tuple[str, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("style name must be non-empty")
        if len(self.codes) < 2:
            raise ValueError(f"style {self.name!r} needs at least 2 state codes")
        if len(set(self.codes)) != len(self.codes):
            raise ValueError(f"style {self.name!r} has repeated state codes")
        if any(len(code) != 1 for code in self.codes):
            raise ValueError(f"style {self.name!r} codes must be single characters")

    @property
    def cardinality(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class StyleSpaceConfig:
    """Ordered micro-style list; order is significant and echoed into manifests."""

    styles: tuple[StyleDef, ...]

    def __post_init__(self):
        if not self.styles:
            raise ValueError("at least one micro-style is required")
        names = [style.name for style in self.styles]
        if len(set(names)) != len(names):
            raise ValueError("style names must be unique")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(style.name for style in self.styles)

    @property
    def n(self) -> int:
        return len(self.styles)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(style.cardinality for style in self.styles)


def default_config(names: Iterable[str]) -> StyleSpaceConfig:
    """Config over the canonical styles (formality, bias, arousal, sentiment)."""
    styles = []
    for name in names:
        if name not in DEFAULT_STATE_CODES:
            raise ValueError(f"no canonical state codes for style {name!r}")
        styles.append(StyleDef(name=name, codes=DEFAULT_STATE_CODES[name]))
    return StyleSpaceConfig(styles=tuple(styles))


def load_config(path: str | Path) -> StyleSpaceConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    styles = tuple(
        StyleDef(name=entry["name"], codes=tuple(entry["codes"]))
        for entry in data["micro_styles"]
    )
    return StyleSpaceConfig(styles=styles)


def save_config(config: StyleSpaceConfig, path: str | Path) -> None:
    data = {"micro_styles": [{"name": s.name, "codes": list(s.codes)} for s in config.styles]}
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n",
                          encoding="utf-8")


def bucket_of(score: float) -> Bucket:
    """Map one score in [0, 1] to its intensity bucket."""
    if not 0.0 <= score <= 1.0:
        raise ScoreOutOfRange(None, None, score)
    return Bucket(bisect_right(BUCKET_EDGES, score))


def bucket_batch(scores: np.ndarray) -> np.ndarray:
    """Vectorized bucket_of over an array; returns int8 bucket indices."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        bad = scores[(scores < 0.0) | (scores > 1.0)][0]
        raise ScoreOutOfRange(None, None, float(bad))
    return np.searchsorted(np.asarray(BUCKET_EDGES), scores, side="right").astype(np.int8)


def bucket_vector(record: "SentenceRecord", config: StyleSpaceConfig) -> dict[str, Bucket]:
    """Per-style buckets for one record, in configured style order."""
    return {style.name: bucket_of(record.score_for(style.name))
            for style in config.styles}


def _combination_from_scores(scores: Mapping[str, float], config: StyleSpaceConfig,
                             record_id: str) -> str:
    chars = []
    for style in config.styles:
        if style.cardinality != 2:
            raise NonBinaryStyle(style.name, style.cardinality)
        if style.name not in scores:
            raise UnscoredRecord(record_id, style.name)
        high, low = style.codes
        chars.append(high if scores[style.name] >= 0.5 else low)
    return "".join(chars)


def combination_of(record: "SentenceRecord", config: StyleSpaceConfig) -> str:
    """Binary joint state label: per style, the high code iff score >= 0.5."""
    return _combination_from_scores(record.scores or {}, config, record.id)


def combination_of_buckets(buckets: Mapping[str, Bucket], config: StyleSpaceConfig) -> str:
    """Joint state label from a bucket vector.

    A bucket maps to the high state iff its midpoint is >= 0.5, i.e. mid,
    high and very high count as the high state; this agrees with the score
    threshold at every bucket midpoint.
    """
    chars = []
    for style in config.styles:
        if style.cardinality != 2:
            raise NonBinaryStyle(style.name, style.cardinality)
        if style.name not in buckets:
            raise UnscoredRecord("<buckets>", style.name)
        high, low = style.codes
        chars.append(high if buckets[style.name] >= Bucket.MID else low)
    return "".join(chars)


def enumerate_combinations(config: StyleSpaceConfig) -> list[str]:
    """All joint state labels, lexicographic in configured style/code order."""
    return ["".join(chars) for chars in
            itertools.product(*(style.codes for style in config.styles))]
