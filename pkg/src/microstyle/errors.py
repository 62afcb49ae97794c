"""Typed errors raised by the toolkit.

Every error carries machine-readable fields so the CLI can echo the error
name plus the offending id/line on one line.
"""
from __future__ import annotations

import json


class MicrostyleError(Exception):
    """Base class; ``details`` holds the structured fields of the failure."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    @property
    def name(self) -> str:
        return type(self).__name__

    def machine_line(self) -> str:
        """One-line JSON rendering used by the CLI on stderr."""
        payload = {"error": self.name, "message": str(self)}
        payload.update(self.details)
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


class MalformedLine(MicrostyleError):
    def __init__(self, line_no: int, reason: str, path: str | None = None):
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"malformed line at {where}: {reason}",
                         line=line_no, reason=reason, path=path)


class DuplicateId(MicrostyleError):
    def __init__(self, record_id: str):
        super().__init__(f"duplicate id {record_id!r}", id=record_id)


class EmptyText(MicrostyleError):
    def __init__(self, record_id: str | None = None):
        suffix = f" for id {record_id!r}" if record_id else ""
        super().__init__(f"empty text{suffix}", id=record_id)


class MissingScore(MicrostyleError):
    def __init__(self, record_id: str, style: str):
        super().__init__(f"no {style!r} score for id {record_id!r}",
                         id=record_id, style=style)


class ScoreOutOfRange(MicrostyleError):
    def __init__(self, record_id: str | None, style: str | None, value: float):
        super().__init__(
            f"score {value!r} outside [0, 1] (id={record_id!r}, style={style!r})",
            id=record_id, style=style, value=value)


class UnknownStyle(MicrostyleError):
    def __init__(self, style: str):
        super().__init__(f"unknown style {style!r}", style=style)


class UnknownId(MicrostyleError):
    def __init__(self, record_id: str):
        super().__init__(f"id {record_id!r} does not resolve to a record",
                         id=record_id)


class UnscoredRecord(MicrostyleError):
    def __init__(self, record_id: str, style: str | None = None):
        suffix = f" (style {style!r})" if style else ""
        super().__init__(f"record {record_id!r} is not scored{suffix}",
                         id=record_id, style=style)


class NonBinaryStyle(MicrostyleError):
    def __init__(self, style: str, cardinality: int):
        super().__init__(
            f"style {style!r} has {cardinality} states; combination states are binary",
            style=style, cardinality=cardinality)


class AllCombinationsEmpty(MicrostyleError):
    def __init__(self):
        super().__init__("every combination has zero source records")


class InfeasibleTotal(MicrostyleError):
    def __init__(self, total: int, available: int):
        super().__init__(
            f"requested total {total} exceeds {available} available records",
            total=total, available=available)


class TargetExceedsAvailable(MicrostyleError):
    def __init__(self, key: str, target: int, available: int):
        super().__init__(
            f"combination {key!r}: target {target} exceeds {available} available",
            key=key, target=target, available=available)


class NoCandidates(MicrostyleError):
    def __init__(self, anchor_id: str):
        super().__init__(f"pair for anchor {anchor_id!r} has no candidates",
                         anchor_id=anchor_id)


class UnselectedPair(MicrostyleError):
    def __init__(self, anchor_id: str):
        super().__init__(f"pair for anchor {anchor_id!r} has no selection",
                         anchor_id=anchor_id)


class MissingFluency(MicrostyleError):
    def __init__(self, record_id: str):
        super().__init__(f"no fluency row for id {record_id!r}", id=record_id)


class StyleMismatch(MicrostyleError):
    def __init__(self, expected: list[str], got: list[str]):
        super().__init__(f"bucket vector covers {got!r}, expected {expected!r}",
                         expected=expected, got=got)


class SeparatorInText(MicrostyleError):
    def __init__(self, record_id: str | None, text: str):
        super().__init__(
            "text contains the prompt separator ' | ' and cannot be emitted "
            f"unambiguously (id={record_id!r})", id=record_id, text=text)


class MalformedPrompt(MicrostyleError):
    def __init__(self, reason: str, prompt: str):
        super().__init__(f"prompt does not parse: {reason}",
                         reason=reason, prompt=prompt)


class LengthMismatch(MicrostyleError):
    def __init__(self, candidates: int, references: int):
        super().__init__(
            f"{candidates} candidates vs {references} references",
            candidates=candidates, references=references)


class EmptyCorpus(MicrostyleError):
    def __init__(self):
        super().__init__("empty corpus")


class DimensionMismatch(MicrostyleError):
    def __init__(self, dim_a: int, dim_b: int):
        super().__init__(f"vector dimensions differ: {dim_a} vs {dim_b}",
                         dim_a=dim_a, dim_b=dim_b)


class ZeroVector(MicrostyleError):
    def __init__(self):
        super().__init__("vector norm below 1e-12; cosine undefined")


class EmptyAfterFilter(MicrostyleError):
    def __init__(self, side: str):
        super().__init__(
            f"{side} token list is empty after dropping tokens without embeddings",
            side=side)


class MissingMetric(MicrostyleError):
    def __init__(self, record_id: str):
        super().__init__(f"no metric tuple for id {record_id!r}", id=record_id)


class EmptyInput(MicrostyleError):
    def __init__(self, what: str = "input"):
        super().__init__(f"{what} is empty", what=what)
