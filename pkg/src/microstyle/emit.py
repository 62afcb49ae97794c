"""Transfer-prompt rendering and pseudo-parallel training-file emission.

The prompt grammar is flat and bit-exact: the sentence, then one
``input {style}: {token}`` clause per configured style, then one
``output {style}: {token}`` clause, all joined by `` | ``. The paraphrase
plays the input role and the anchor the output role, so a model trained on
these examples learns to move text *toward* the anchor's style.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from ._jsonl import read_objects, require_field, write_objects
from .errors import (
    MalformedPrompt,
    SeparatorInText,
    StyleMismatch,
    UnselectedPair,
)
from .records import PairRecord, SentenceRecord, record_index, resolve
from .styles import Bucket, StyleSpaceConfig, bucket_vector

PROMPT_PREFIX = "transfer: "
SEPARATOR = " | "


@dataclass(frozen=True)
class TrainingExample:
    """One pseudo-parallel example: paraphrase-as-input, anchor-as-target."""

    input: str
    target: str
    anchor_id: str
    paraphrase_id: str
    input_buckets: dict[str, Bucket]
    output_buckets: dict[str, Bucket]


def _check_styles(buckets: Mapping[str, Bucket], config: StyleSpaceConfig) -> None:
    if set(buckets) != set(config.names):
        raise StyleMismatch(list(config.names), sorted(buckets))


def render_prompt(
    text: str,
    input_buckets: Mapping[str, Bucket],
    output_buckets: Mapping[str, Bucket],
    config: StyleSpaceConfig,
    record_id: str | None = None,
) -> str:
    """Build the transfer prompt; texts containing the separator are rejected."""
    _check_styles(input_buckets, config)
    _check_styles(output_buckets, config)
    if SEPARATOR in text:
        raise SeparatorInText(record_id, text)
    parts = [f"{PROMPT_PREFIX}{text}"]
    for role, buckets in (("input", input_buckets), ("output", output_buckets)):
        for name in config.names:
            parts.append(f"{role} {name}: {buckets[name].token}")
    return SEPARATOR.join(parts)


def parse_prompt(prompt: str, config: StyleSpaceConfig) -> tuple[str, dict[str, Bucket], dict[str, Bucket]]:
    """Invert render_prompt back to (text, input buckets, output buckets)."""
    if not prompt.startswith(PROMPT_PREFIX):
        raise MalformedPrompt(f"prompt must start with {PROMPT_PREFIX!r}", prompt)
    segments = prompt[len(PROMPT_PREFIX):].split(SEPARATOR)
    expected = 1 + 2 * config.n
    if len(segments) != expected:
        raise MalformedPrompt(
            f"expected {expected} segments for {config.n} styles, got {len(segments)}", prompt)
    text = segments[0]
    vectors: dict[str, dict[str, Bucket]] = {"input": {}, "output": {}}
    clauses = [(role, name) for role in ("input", "output") for name in config.names]
    for segment, (role, name) in zip(segments[1:], clauses):
        head = f"{role} {name}: "
        if not segment.startswith(head):
            raise MalformedPrompt(f"expected clause {head!r}..., got {segment!r}", prompt)
        token = segment[len(head):]
        try:
            vectors[role][name] = Bucket.from_token(token)
        except ValueError:
            raise MalformedPrompt(f"unknown bucket token {token!r}", prompt) from None
    return text, vectors["input"], vectors["output"]


def emit_dataset(
    pairs: Iterable[PairRecord],
    records: Iterable[SentenceRecord] | Mapping[str, SentenceRecord],
    config: StyleSpaceConfig,
) -> list[TrainingExample]:
    """One training example per selected pair, in input order."""
    index = record_index(records)
    examples = []
    for pair in pairs:
        if pair.selected_id is None:
            raise UnselectedPair(pair.anchor_id)
        anchor = resolve(index, pair.anchor_id)
        paraphrase = resolve(index, pair.selected_id)
        input_buckets = bucket_vector(paraphrase, config)
        output_buckets = bucket_vector(anchor, config)
        prompt = render_prompt(paraphrase.text, input_buckets, output_buckets,
                               config, record_id=paraphrase.id)
        examples.append(TrainingExample(
            input=prompt,
            target=anchor.text,
            anchor_id=anchor.id,
            paraphrase_id=paraphrase.id,
            input_buckets=input_buckets,
            output_buckets=output_buckets,
        ))
    return examples


def write_training(examples: Iterable[TrainingExample], path: str | Path) -> None:
    write_objects(({"input": ex.input, "target": ex.target,
                    "anchor_id": ex.anchor_id, "paraphrase_id": ex.paraphrase_id}
                   for ex in examples), path)


def read_training(path: str | Path, config: StyleSpaceConfig) -> list[TrainingExample]:
    """Load a training file, re-parsing each prompt (so grammar errors surface here)."""
    examples = []
    for line_no, obj in read_objects(path):
        prompt = require_field(obj, "input", str, line_no, path)
        target = require_field(obj, "target", str, line_no, path)
        anchor_id = require_field(obj, "anchor_id", str, line_no, path)
        paraphrase_id = require_field(obj, "paraphrase_id", str, line_no, path)
        _, input_buckets, output_buckets = parse_prompt(prompt, config)
        examples.append(TrainingExample(
            input=prompt,
            target=target,
            anchor_id=anchor_id,
            paraphrase_id=paraphrase_id,
            input_buckets=input_buckets,
            output_buckets=output_buckets,
        ))
    return examples
