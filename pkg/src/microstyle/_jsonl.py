"""Line-oriented record file helpers.

All corpus files are JSONL: one JSON object per line, UTF-8. Parsing is
strict and reports 1-based line numbers so bad lines can be fixed in place.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

from .errors import MalformedLine


def read_objects(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (line_number, object) pairs; blank or non-object lines are errors."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                raise MalformedLine(line_no, "blank line", str(path))
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"invalid JSON: {exc.msg}", str(path)) from exc
            if not isinstance(obj, dict):
                raise MalformedLine(line_no, "line is not a JSON object", str(path))
            yield line_no, obj


def write_objects(objects, path: str | Path) -> None:
    """Write objects one per line, preserving key order, UTF-8 unescaped."""
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for obj in objects:
            handle.write(json.dumps(obj, ensure_ascii=False))
            handle.write("\n")


def require_field(obj: dict, field: str, kind: type, line_no: int, path: str) -> Any:
    if field not in obj:
        raise MalformedLine(line_no, f"missing field {field!r}", path)
    value = obj[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise MalformedLine(line_no, f"field {field!r} is not a number", path)
        return float(value)
    if not isinstance(value, kind):
        raise MalformedLine(line_no, f"field {field!r} is not a {kind.__name__}", path)
    return value
