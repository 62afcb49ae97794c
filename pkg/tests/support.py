"""Shared helpers for the test suite (importable by name, unlike conftest)."""
from __future__ import annotations

from pathlib import Path

from microstyle.records import SentenceRecord

DATA = Path(__file__).parent / "data"


def make_record(rid: str, text: str = "some text", **scores) -> SentenceRecord:
    return SentenceRecord(id=rid, text=text, scores=dict(scores) or None)
