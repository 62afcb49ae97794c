"""Dataset construction and evaluation for multi-attribute text style transfer."""

__version__ = "0.1.0"

from .distribution import (
    DistributionPlan,
    largest_remainder,
    materialize,
    plan_balanced,
    plan_skewed,
    stddev_report,
    tally,
)
from .emit import TrainingExample, emit_dataset, parse_prompt, render_prompt
from .errors import MicrostyleError
from .evaluate import (
    EvalReport,
    TransferredRecord,
    aggregate_by_combination,
    bleu,
    build_eval_report,
    cosine_similarity,
    representation_report,
    success_ratio,
    wmd,
)
from .pairs import (
    FluencyRecord,
    diversity_filter,
    fluency_filter,
    select_best_paraphrase,
)
from .records import (
    DatasetManifest,
    PairRecord,
    SentenceRecord,
    attach_scores,
    ingest_sentences,
    write_manifest,
)
from .scoring import (
    ScorerSpec,
    score_arousal_heuristic,
    score_formality_heuristic,
)
from .styles import (
    Bucket,
    StyleSpaceConfig,
    bucket_of,
    bucket_vector,
    combination_of,
    enumerate_combinations,
)

__all__ = [
    "Bucket",
    "DatasetManifest",
    "DistributionPlan",
    "EvalReport",
    "FluencyRecord",
    "MicrostyleError",
    "PairRecord",
    "ScorerSpec",
    "SentenceRecord",
    "StyleSpaceConfig",
    "TrainingExample",
    "TransferredRecord",
    "aggregate_by_combination",
    "attach_scores",
    "bleu",
    "bucket_of",
    "bucket_vector",
    "build_eval_report",
    "combination_of",
    "cosine_similarity",
    "diversity_filter",
    "emit_dataset",
    "enumerate_combinations",
    "fluency_filter",
    "ingest_sentences",
    "largest_remainder",
    "materialize",
    "parse_prompt",
    "plan_balanced",
    "plan_skewed",
    "render_prompt",
    "representation_report",
    "score_arousal_heuristic",
    "score_formality_heuristic",
    "select_best_paraphrase",
    "stddev_report",
    "success_ratio",
    "tally",
    "wmd",
    "write_manifest",
]
