"""Command-line entry points: adapter-score, adapter-embed, adapter-fluency.

Exit codes: 0 success (including empty input -> empty output), 1 schema
violation in input or computed rows, 2 usage error, 3 model failure. On
any nonzero exit the output file is not created or modified.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

from .backends import BACKENDS, make_backend
from .ops import embed_corpus, perplexity_corpus, score_corpus
from .schemas import ModelError, SchemaError

EXIT_SCHEMA = 1
EXIT_MODEL = 3


def _base_parser(prog: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument("--in", dest="in_path", required=True,
                        help="sentences file (JSONL with id and text)")
    parser.add_argument("--out", required=True, help="output file")
    parser.add_argument("--backend", choices=sorted(BACKENDS),
                        default="transformers",
                        help="hashed = deterministic offline stand-in")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--manifest", help="also write a run manifest here")
    return parser


def _run(parser: argparse.ArgumentParser, op: Callable[[], int]) -> int:
    try:
        count = op()
    except SchemaError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ModelError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    print(f"{parser.prog}: wrote {count} rows", file=sys.stderr)
    return 0


def _default_model(args, parser: argparse.ArgumentParser, flag: str,
                   purpose: str) -> str:
    """Hashed runs can invent a model id; real backends must be told one."""
    given = getattr(args, flag)
    if given:
        return given
    if args.backend == "hashed":
        return f"hashed/{purpose}"
    parser.error(f"--backend {args.backend} requires --{flag.replace('_', '-')}")


def score_main(argv: Sequence[str] | None = None) -> int:
    parser = _base_parser("adapter-score",
                          "Write per-style scores for a sentences file.")
    parser.add_argument("--styles", required=True,
                        help="comma-separated style names")
    parser.add_argument("--model", action="append", default=[],
                        metavar="STYLE=MODEL_ID",
                        help="classifier checkpoint per style (repeatable)")
    args = parser.parse_args(argv)

    styles = [s.strip() for s in args.styles.split(",") if s.strip()]
    if not styles:
        parser.error("--styles must name at least one style")
    models = {}
    for entry in args.model:
        style, sep, model_id = entry.partition("=")
        if not sep or not style or not model_id:
            parser.error(f"--model expects STYLE=MODEL_ID, got {entry!r}")
        models[style] = model_id
    for style in styles:
        if style not in models:
            if args.backend != "hashed":
                parser.error(f"--backend {args.backend} requires "
                             f"--model {style}=MODEL_ID")
            models[style] = f"hashed/{style}"

    backend = make_backend(args.backend, args.device, args.batch_size)
    return _run(parser, lambda: score_corpus(
        args.in_path, args.out, styles, models, backend, args.manifest))


def embed_main(argv: Sequence[str] | None = None) -> int:
    parser = _base_parser("adapter-embed",
                          "Write sentence embeddings for a sentences file.")
    parser.add_argument("--model", default=None, help="embedding checkpoint")
    parser.add_argument("--dim", type=int, default=16,
                        help="vector width (hashed backend only)")
    args = parser.parse_args(argv)
    model = _default_model(args, parser, "model", "embedder")

    backend = make_backend(args.backend, args.device, args.batch_size)
    return _run(parser, lambda: embed_corpus(
        args.in_path, args.out, model, backend, args.dim, args.manifest))


def fluency_main(argv: Sequence[str] | None = None) -> int:
    parser = _base_parser("adapter-fluency",
                          "Write perplexity + adversarial rows for a sentences file.")
    parser.add_argument("--model", default=None, help="causal LM checkpoint")
    parser.add_argument("--adversarial-model", dest="adversarial_model",
                        default=None, help="adversarial classifier checkpoint")
    args = parser.parse_args(argv)
    model = _default_model(args, parser, "model", "lm")
    adversarial = _default_model(args, parser, "adversarial_model", "adversarial")

    backend = make_backend(args.backend, args.device, args.batch_size)
    return _run(parser, lambda: perplexity_corpus(
        args.in_path, args.out, model, adversarial, backend, args.manifest))
