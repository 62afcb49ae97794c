"""File schemas shared with the style-transfer toolkit, validated locally.

The adapter talks to the toolkit only through files: it reads sentence
files and writes score / embedding / fluency files the toolkit ingests.
Validation lives here so a malformed row can never reach disk — every row
is checked before anything is written, and writes are atomic (temp file +
rename), so a failed run leaves no partial output behind.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class SchemaError(Exception):
    """Input or output violates a file schema (CLI exit code 1)."""

    def __init__(self, message: str, path: str | Path | None = None,
                 line: int | None = None):
        where = ""
        if path is not None:
            where = f" at {path}" + (f":{line}" if line is not None else "")
        super().__init__(message + where)


class ModelError(Exception):
    """A model could not be resolved or run (CLI exit code 3)."""


def read_sentences(path: str | Path) -> list[dict]:
    """Load a sentences file: one JSON object per line with ``id`` and ``text``."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None

    sentences: list[dict] = []
    seen: set[str] = set()
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", path, line_no) from None
        if not isinstance(obj, dict):
            raise SchemaError("line is not a JSON object", path, line_no)
        rid = obj.get("id")
        if not isinstance(rid, str) or not rid:
            raise SchemaError("missing or empty 'id'", path, line_no)
        if rid in seen:
            raise SchemaError(f"duplicate id {rid!r}", path, line_no)
        seen.add(rid)
        text = obj.get("text")
        if not isinstance(text, str):
            raise SchemaError(f"missing 'text' for id {rid!r}", path, line_no)
        sentences.append({"id": rid, "text": text})
    return sentences


def _require_unit_float(value: object, what: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SchemaError(f"{what} is not a number: {value!r}")
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise SchemaError(f"{what} out of [0, 1]: {value!r}")
    return value


def validate_score_rows(rows: Sequence[Mapping], styles: Sequence[str]) -> None:
    """Every row must carry exactly the requested styles, each in [0, 1]."""
    for row in rows:
        scores = row.get("styles")
        if not isinstance(scores, dict) or set(scores) != set(styles):
            raise SchemaError(f"row {row.get('id')!r} must score exactly "
                              f"{sorted(styles)}, got {sorted(scores or ())}")
        for style, value in scores.items():
            _require_unit_float(value, f"{row['id']}/{style}")


def validate_embedding_rows(rows: Sequence[Mapping]) -> None:
    """Vectors must be non-empty, finite, and of one consistent dimension."""
    dim: int | None = None
    for row in rows:
        vector = row.get("vector")
        if not isinstance(vector, list) or not vector:
            raise SchemaError(f"row {row.get('id')!r} has no vector")
        if dim is None:
            dim = len(vector)
        elif len(vector) != dim:
            raise SchemaError(f"row {row['id']!r} has dimension {len(vector)}, "
                              f"expected {dim}")
        if not all(isinstance(v, float) and math.isfinite(v) for v in vector):
            raise SchemaError(f"row {row['id']!r} has a non-finite component")


def validate_fluency_rows(rows: Sequence[Mapping]) -> None:
    """Rows carry a positive finite perplexity and an adversarial in [0, 1]."""
    for row in rows:
        perplexity = row.get("perplexity")
        if (not isinstance(perplexity, float) or not math.isfinite(perplexity)
                or perplexity <= 0.0):
            raise SchemaError(f"row {row.get('id')!r} has invalid perplexity "
                              f"{perplexity!r}")
        _require_unit_float(row.get("adversarial"), f"{row['id']}/adversarial")


def write_rows(rows: Iterable[Mapping], path: str | Path) -> None:
    """Write JSONL atomically: all rows land, or no file is touched."""
    payload = "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)
    _write_atomic(payload, path)


def write_json(obj: Mapping, path: str | Path) -> None:
    _write_atomic(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", path)


def _write_atomic(payload: str, path: str | Path) -> None:
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."),
                                    prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise
