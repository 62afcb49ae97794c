"""Command-line pipeline: every stage reads files, writes files, no hidden state.

Stages compose in the natural order

    ingest -> score -> bucket -> pair -> filter -> plan -> sample -> emit

with ``eval`` and ``report`` consuming transferred output afterwards. Each
invocation drops a ``<out>.run.json`` sidecar recording the stage, seed, and
a hash of the style-space config, so any artifact can be traced back to its
exact inputs. Data errors exit 1 with a one-line JSON description on stderr;
usage errors exit 2.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import distribution, emit, evaluate, pairs, records, scoring, styles
from ._jsonl import write_objects
from .errors import DuplicateId, MicrostyleError, UnknownId

# Dataset-manifest sidecars use basenames only, so reruns in different
# directories stay byte-identical.


def _config_hash(config_path: str | None) -> str | None:
    if config_path is None:
        return None
    return hashlib.sha256(Path(config_path).read_bytes()).hexdigest()


def _write_run_manifest(out_path: str, stage: str, config_path: str | None,
                        seed: int | None, inputs: dict[str, str | None],
                        params: dict) -> None:
    doc = {
        "stage": stage,
        "seed": seed,
        "config_hash": _config_hash(config_path),
        "inputs": {name: Path(path).name for name, path in inputs.items()
                   if path is not None},
        "output": Path(out_path).name,
        "params": {key: params[key] for key in sorted(params)},
    }
    Path(f"{out_path}.run.json").write_text(
        json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _load_scored(config: styles.StyleSpaceConfig, sentences_path: str,
                 scores_path: str | None) -> list[records.SentenceRecord]:
    """Sentences plus full score coverage; partial coverage is a data error."""
    loaded = records.ingest_sentences(sentences_path)
    if scores_path is not None:
        scored, report = records.attach_scores(loaded, scores_path, config.names)
        if report:
            raise report[0]
        return scored
    for record in loaded:
        for name in config.names:
            record.score_for(name)  # raises UnscoredRecord naming the hole
    return loaded


def _cmd_ingest(args) -> None:
    loaded = records.ingest_sentences(args.in_path)
    records.write_sentences(loaded, args.out)
    _write_run_manifest(args.out, "ingest", None, None,
                        {"in": args.in_path}, {"records": len(loaded)})


def _cmd_score(args) -> None:
    loaded = records.ingest_sentences(args.in_path)
    lexicon = scoring.load_lexicon(args.lexicon) if args.lexicon else frozenset()
    style_names = [s.strip() for s in args.styles.split(",") if s.strip()]
    scored = scoring.score_records(loaded, style_names, lexicon)
    records.write_score_rows(scored, args.out)
    _write_run_manifest(args.out, "score", None, None,
                        {"in": args.in_path, "lexicon": args.lexicon},
                        {"styles": style_names})


def _cmd_bucket(args) -> None:
    config = styles.load_config(args.config)
    scored = _load_scored(config, args.in_path, args.scores)
    rows = []
    for record in scored:
        vector = styles.bucket_vector(record, config)
        rows.append({"id": record.id,
                     "buckets": {name: vector[name].token for name in config.names}})
    write_objects(rows, args.out)
    _write_run_manifest(args.out, "bucket", args.config, None,
                        {"in": args.in_path, "scores": args.scores},
                        {"records": len(rows)})


def _cmd_pair(args) -> None:
    config = styles.load_config(args.config)
    scored = _load_scored(config, args.sentences, args.scores)
    pair_list = records.read_pairs(args.in_path)
    index = records.record_index(scored)
    selected = [pairs.select_best_paraphrase(pair, index, config)
                for pair in pair_list]
    records.write_pairs(selected, args.out)
    _write_run_manifest(args.out, "pair", args.config, None,
                        {"in": args.in_path, "sentences": args.sentences,
                         "scores": args.scores},
                        {"pairs": len(selected)})


def _cmd_filter(args) -> None:
    params: dict = {"kind": args.kind}
    if args.kind == "diversity":
        config = styles.load_config(args.config)
        scored = _load_scored(config, args.sentences, args.scores)
        pair_list = records.read_pairs(args.in_path)
        kept = pairs.diversity_filter(pair_list, scored, config)
        records.write_pairs(kept, args.out)
        params.update({"in_pairs": len(pair_list), "kept": len(kept)})
    elif args.kind == "fluency":
        loaded = records.ingest_sentences(args.in_path)
        fluency = pairs.read_fluency(args.fluency)
        kept_records = pairs.fluency_filter(loaded, fluency,
                                            args.max_perplexity,
                                            args.min_adversarial)
        records.write_sentences(kept_records, args.out)
        params.update({"max_perplexity": args.max_perplexity,
                       "min_adversarial": args.min_adversarial,
                       "in_records": len(loaded), "kept": len(kept_records)})
    else:  # anchors: subset sentences to the anchors of a pairs file
        loaded = records.ingest_sentences(args.in_path)
        pair_list = records.read_pairs(args.pairs)
        anchor_ids = {pair.anchor_id for pair in pair_list}
        kept_records = [record for record in loaded if record.id in anchor_ids]
        records.write_sentences(kept_records, args.out)
        params.update({"anchors": len(anchor_ids), "kept": len(kept_records)})
    _write_run_manifest(args.out, "filter", args.config, None,
                        {"in": args.in_path, "sentences": args.sentences,
                         "scores": args.scores, "fluency": args.fluency,
                         "pairs": args.pairs},
                        params)


def _counts_from_args(args, config: styles.StyleSpaceConfig) -> dict[str, int]:
    if args.counts is not None:
        raw = json.loads(Path(args.counts).read_text(encoding="utf-8"))
        return {str(key): int(value) for key, value in raw.items()}
    scored = _load_scored(config, args.in_path, args.scores)
    return distribution.tally(scored, config)


def _cmd_plan(args) -> None:
    config = styles.load_config(args.config)
    source_counts = _counts_from_args(args, config)
    if args.mode == "balanced":
        plan = distribution.plan_balanced(source_counts, args.floor, args.seed)
    else:
        plan = distribution.plan_skewed(source_counts, args.total, args.seed)
    distribution.save_plan(plan, args.out)
    _write_run_manifest(args.out, "plan", args.config, args.seed,
                        {"in": args.in_path, "scores": args.scores,
                         "counts": args.counts},
                        {"mode": args.mode, "floor": args.floor,
                         "total": args.total})


def _cmd_sample(args) -> None:
    config = styles.load_config(args.config)
    plan = distribution.load_plan(args.plan)
    if args.seed is not None:
        plan = distribution.DistributionPlan(
            mode=plan.mode, target_counts=plan.target_counts,
            source_counts=plan.source_counts, seed=args.seed,
            floor_share=plan.floor_share, upsampled_keys=plan.upsampled_keys)
    scored = _load_scored(config, args.in_path, args.scores)
    sampled = distribution.materialize(plan, scored, config)
    records.write_sentences(sampled, args.out)
    if args.manifest:
        corpus_name = args.corpus_name or Path(args.in_path).stem
        records.write_manifest(sampled, config, plan.mode, plan.seed,
                               corpus_name, args.manifest)
    _write_run_manifest(args.out, "sample", args.config, plan.seed,
                        {"in": args.in_path, "scores": args.scores,
                         "plan": args.plan},
                        {"mode": plan.mode, "records": len(sampled)})


def _cmd_emit(args) -> None:
    config = styles.load_config(args.config)
    scored = _load_scored(config, args.sentences, args.scores)
    pair_list = records.read_pairs(args.pairs)
    index = records.record_index(scored)
    if args.restrict is not None:
        by_anchor: dict[str, records.PairRecord] = {}
        for pair in pair_list:
            if pair.anchor_id in by_anchor:
                raise DuplicateId(pair.anchor_id)
            by_anchor[pair.anchor_id] = pair
        sampled = records.ingest_sentences(args.restrict, allow_duplicates=True)
        ordered = []
        for record in sampled:
            if record.id not in by_anchor:
                raise UnknownId(record.id)
            ordered.append(by_anchor[record.id])
        examples = emit.emit_dataset(ordered, index, config)
    else:
        examples = emit.emit_dataset(pair_list, index, config)
    emit.write_training(examples, args.out)
    _write_run_manifest(args.out, "emit", args.config, None,
                        {"pairs": args.pairs, "sentences": args.sentences,
                         "scores": args.scores, "restrict": args.restrict},
                        {"examples": len(examples)})


def _measured_records(args, config) -> list[evaluate.TransferredRecord]:
    transferred = evaluate.read_transferred(args.in_path, config)
    if args.scores is not None:
        rows = records.read_score_rows(args.scores)
        out = []
        for record in transferred:
            if record.id not in rows:
                raise UnknownId(record.id)
            out.append(evaluate.with_measured_scores(record, rows[record.id]))
        return out
    if args.rescore:
        lexicon = scoring.load_lexicon(args.lexicon) if args.lexicon else frozenset()
        out = []
        for record in transferred:
            probe = records.SentenceRecord(id=record.id, text=record.text)
            scored = scoring.score_records([probe], config.names, lexicon)[0]
            out.append(evaluate.with_measured_scores(record, scored.scores or {}))
        return out
    return transferred


def _cmd_eval(args) -> None:
    config = styles.load_config(args.config)
    measured = _measured_records(args, config)
    sources = records.record_index(records.ingest_sentences(args.sentences))
    token_embeddings = (evaluate.read_embeddings(args.embeddings)
                        if args.embeddings else None)
    sentence_embeddings = (evaluate.read_embeddings(args.sentence_embeddings)
                           if args.sentence_embeddings else None)
    fluency = pairs.read_fluency(args.fluency) if args.fluency else None
    report = evaluate.build_eval_report(
        measured, config, sources,
        token_embeddings=token_embeddings,
        sentence_embeddings=sentence_embeddings,
        fluency=fluency,
        bleu_against=args.bleu_against,
    )
    evaluate.save_report(report, args.out)
    _write_run_manifest(args.out, "eval", args.config, None,
                        {"in": args.in_path, "sentences": args.sentences,
                         "scores": args.scores, "embeddings": args.embeddings,
                         "sentence_embeddings": args.sentence_embeddings,
                         "fluency": args.fluency},
                        {"bleu_against": args.bleu_against,
                         "rescore": args.rescore})


def _cmd_report(args) -> None:
    config = styles.load_config(args.config)
    measured = _measured_records(args, config)
    representation = evaluate.representation_report(measured, config)
    per_combination: dict[str, dict[str, float]] = {}
    if args.metrics is not None:
        doc = json.loads(Path(args.metrics).read_text(encoding="utf-8"))
        per_combination = {key: dict(row)
                           for key, row in doc.get("per_combination", {}).items()}
    evaluate.write_report_csv(per_combination, args.out, representation)
    _write_run_manifest(args.out, "report", args.config, None,
                        {"in": args.in_path, "scores": args.scores,
                         "metrics": args.metrics},
                        {"rescore": args.rescore})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microstyle",
        description="Dataset construction and evaluation for multi-attribute "
                    "text style transfer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.set_defaults(func=func)
        return cmd

    cmd = add("ingest", _cmd_ingest, "validate and normalize a sentences file")
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--out", required=True)

    cmd = add("score", _cmd_score, "attach heuristic style scores")
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--styles", default="formality,arousal",
                     help="comma-separated heuristic styles")
    cmd.add_argument("--lexicon", default=None)
    cmd.add_argument("--out", required=True)

    cmd = add("bucket", _cmd_bucket, "write per-record intensity buckets")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--out", required=True)

    cmd = add("pair", _cmd_pair, "select the most style-distant paraphrase per anchor")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--in", dest="in_path", required=True,
                     help="pairs file with candidate lists")
    cmd.add_argument("--sentences", required=True)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--out", required=True)

    cmd = add("filter", _cmd_filter, "diversity / fluency / anchors filters")
    cmd.add_argument("--kind", choices=["diversity", "fluency", "anchors"],
                     required=True)
    cmd.add_argument("--config", default=None)
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--sentences", default=None)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--fluency", default=None)
    cmd.add_argument("--pairs", default=None)
    cmd.add_argument("--max-perplexity", type=float,
                     default=pairs.DEFAULT_MAX_PERPLEXITY)
    cmd.add_argument("--min-adversarial", type=float,
                     default=pairs.DEFAULT_MIN_ADVERSARIAL)
    cmd.add_argument("--out", required=True)

    cmd = add("plan", _cmd_plan, "build a balanced or skewed sampling plan")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--mode", choices=["balanced", "skewed"], required=True)
    cmd.add_argument("--in", dest="in_path", default=None,
                     help="scored sentences to tally (or use --counts)")
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--counts", default=None,
                     help="JSON file of per-combination counts")
    cmd.add_argument("--floor", type=float, default=0.05)
    cmd.add_argument("--total", type=int, default=None)
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--out", required=True)

    cmd = add("sample", _cmd_sample, "materialize a plan into a sampled corpus")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--plan", required=True)
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--seed", type=int, default=None,
                     help="override the plan's seed")
    cmd.add_argument("--manifest", default=None,
                     help="also write a dataset manifest here")
    cmd.add_argument("--corpus-name", default=None)
    cmd.add_argument("--out", required=True)

    cmd = add("emit", _cmd_emit, "emit transfer prompts as a training file")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--pairs", required=True)
    cmd.add_argument("--sentences", required=True)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--restrict", default=None,
                     help="sampled sentences file; one example per occurrence")
    cmd.add_argument("--out", required=True)

    cmd = add("eval", _cmd_eval, "score transferred output against the metric suite")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--sentences", required=True,
                     help="source sentences for references")
    cmd.add_argument("--scores", default=None,
                     help="measured style scores for the transferred text")
    cmd.add_argument("--rescore", action="store_true",
                     help="measure styles with the built-in heuristics")
    cmd.add_argument("--lexicon", default=None)
    cmd.add_argument("--embeddings", default=None, help="token vectors for WMD")
    cmd.add_argument("--sentence-embeddings", default=None,
                     help="sentence vectors for cosine similarity")
    cmd.add_argument("--fluency", default=None)
    cmd.add_argument("--bleu-against", choices=["source", "reference"],
                     default="source")
    cmd.add_argument("--out", required=True)

    cmd = add("report", _cmd_report, "representation percentages + metrics CSV")
    cmd.add_argument("--config", required=True)
    cmd.add_argument("--in", dest="in_path", required=True)
    cmd.add_argument("--scores", default=None)
    cmd.add_argument("--rescore", action="store_true")
    cmd.add_argument("--lexicon", default=None)
    cmd.add_argument("--metrics", default=None,
                     help="eval report JSON to flatten into the CSV")
    cmd.add_argument("--out", required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plan":
        if args.mode == "skewed" and args.total is None:
            parser.error("--total is required with --mode skewed")
        if args.counts is None and args.in_path is None:
            parser.error("plan needs --counts or --in")
    try:
        args.func(args)
    except MicrostyleError as err:
        print(err.machine_line(), file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(json.dumps({"error": "FileNotFound", "path": str(err.filename)}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
