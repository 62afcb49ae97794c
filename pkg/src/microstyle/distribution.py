"""Joint combination tallies and balanced/skewed training-subset construction.

Balancing down-samples every combination to a common target count, with a
floor so the least represented combination still makes up at least
``floor_share`` of the raw corpus size (rare combinations are up-sampled with
replacement to reach it). The skewed counterpart preserves the corpus's
natural joint proportions at the same total via largest-remainder
apportionment. All arithmetic is exact until the final std-dev division, and
all sampling runs on per-combination xoshiro256** streams, so plans and
materializations are reproducible bit-for-bit.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import (
    AllCombinationsEmpty,
    EmptyInput,
    InfeasibleTotal,
    TargetExceedsAvailable,
)
from .rng import stream_for_key
from .styles import StyleSpaceConfig, combination_of, enumerate_combinations

if TYPE_CHECKING:
    from .records import SentenceRecord

logger = logging.getLogger(__name__)

# Up-sampling beyond this duplication factor is allowed but suspicious.
DUPLICATION_WARN_FACTOR = 20

MODE_BALANCED = "balanced"
MODE_SKEWED = "skewed"


@dataclass(frozen=True)
class DistributionPlan:
    """Target per-combination counts plus everything needed to reproduce them."""

    mode: str
    target_counts: dict[str, int]
    source_counts: dict[str, int]
    seed: int
    floor_share: float | None
    upsampled_keys: frozenset[str]

    def total(self) -> int:
        return sum(self.target_counts.values())

    def validate(self) -> None:
        if self.mode not in (MODE_BALANCED, MODE_SKEWED):
            raise ValueError(f"unknown plan mode {self.mode!r}")
        if set(self.target_counts) != set(self.source_counts):
            raise ValueError("target and source count keys differ")
        if self.mode == MODE_BALANCED and len(set(self.target_counts.values())) > 1:
            raise ValueError("balanced plan has unequal targets")


def tally(records: Iterable["SentenceRecord"], config: StyleSpaceConfig) -> dict[str, int]:
    """Per-combination record counts over the full combination space."""
    counts = {key: 0 for key in enumerate_combinations(config)}
    for record in records:
        counts[combination_of(record, config)] += 1
    return counts


def _exact_share(share: float | str | Fraction) -> Fraction:
    # Shares are interpreted at decimal precision ("0.05" means exactly 5%),
    # not at binary-float precision, so floor arithmetic stays exact.
    if isinstance(share, Fraction):
        return share
    return Fraction(str(share))


def plan_balanced(
    source_counts: Mapping[str, int],
    floor_share: float | str | Fraction = 0.05,
    seed: int = 0,
) -> DistributionPlan:
    """Uniform target counts: max(min source count, ceil(floor_share * total))."""
    counts = dict(source_counts)
    if not counts or all(v == 0 for v in counts.values()):
        raise AllCombinationsEmpty()
    share = _exact_share(floor_share)
    if not 0 <= share < 1:
        raise ValueError(f"floor_share must be in [0, 1), got {floor_share!r}")
    raw_total = sum(counts.values())
    floor = math.ceil(share * raw_total)
    target = max(min(counts.values()), floor)
    upsampled = frozenset(key for key, count in counts.items() if count < target)
    for key in sorted(upsampled):
        count = counts[key]
        if count and target > DUPLICATION_WARN_FACTOR * count:
            logger.warning(
                "combination %r up-samples %d records to %d (factor %.1f)",
                key, count, target, target / count)
    return DistributionPlan(
        mode=MODE_BALANCED,
        target_counts={key: target for key in counts},
        source_counts=counts,
        seed=seed,
        floor_share=float(share),
        upsampled_keys=upsampled,
    )


def largest_remainder(weights: Mapping[str, int], total: int) -> dict[str, int]:
    """Hamilton apportionment of ``total`` proportional to integer weights.

    Pure integer arithmetic: quotas are total*w/S, floors via integer
    division, and the leftover units go to the largest remainders with ties
    broken by lexicographic key. Always sums to ``total`` exactly.
    """
    weight_sum = sum(weights.values())
    if weight_sum <= 0:
        raise AllCombinationsEmpty()
    floors = {}
    remainders = {}
    for key, weight in weights.items():
        scaled = total * weight
        floors[key] = scaled // weight_sum
        remainders[key] = scaled % weight_sum
    leftover = total - sum(floors.values())
    for key in sorted(weights, key=lambda k: (-remainders[k], k))[:leftover]:
        floors[key] += 1
    return floors


def plan_skewed(
    source_counts: Mapping[str, int],
    total: int,
    seed: int = 0,
) -> DistributionPlan:
    """Proportional target counts at a fixed total, capped at availability.

    Targets are apportioned by largest remainder; any target exceeding its
    source count is capped there and the surplus re-apportioned among the
    uncapped keys (repeated to fixpoint). With duplication disabled a total
    beyond the source size is infeasible.
    """
    counts = dict(source_counts)
    if not counts or all(v == 0 for v in counts.values()):
        raise AllCombinationsEmpty()
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    available = sum(counts.values())
    if total > available:
        raise InfeasibleTotal(total, available)

    targets = {key: 0 for key in counts}
    active = {key: count for key, count in counts.items() if count > 0}
    remaining = total
    while remaining > 0:
        if not active:
            raise InfeasibleTotal(total, available)
        allocation = largest_remainder(active, remaining)
        capped = {key for key, alloc in allocation.items() if alloc > counts[key]}
        if not capped:
            for key, alloc in allocation.items():
                targets[key] = alloc
            break
        for key in capped:
            targets[key] = counts[key]
            remaining -= counts[key]
            del active[key]
    return DistributionPlan(
        mode=MODE_SKEWED,
        target_counts=targets,
        source_counts=counts,
        seed=seed,
        floor_share=None,
        upsampled_keys=frozenset(),
    )


def materialize(
    plan: DistributionPlan,
    records: Iterable["SentenceRecord"],
    config: StyleSpaceConfig,
) -> list["SentenceRecord"]:
    """Draw the planned per-combination samples, deterministically.

    Within each combination, records are sorted by id and shuffled on a
    stream derived from (seed, key); targets above availability (balanced
    up-sampling) draw with replacement instead. Output concatenates
    combinations in lexicographic key order regardless of execution order.
    """
    groups: dict[str, list["SentenceRecord"]] = {key: [] for key in plan.target_counts}
    for record in records:
        key = combination_of(record, config)
        if key in groups:
            groups[key].append(record)

    output: list["SentenceRecord"] = []
    for key in sorted(plan.target_counts):
        target = plan.target_counts[key]
        if target == 0:
            continue
        group = sorted(groups[key], key=lambda r: r.id)
        if target > len(group) and (plan.mode != MODE_BALANCED or not group):
            raise TargetExceedsAvailable(key, target, len(group))
        rng = stream_for_key(plan.seed, key)
        if target <= len(group):
            rng.shuffle(group)
            output.extend(group[:target])
        else:
            output.extend(group[rng.below(len(group))] for _ in range(target))
    return output


def stddev_report(counts: Mapping[str, int] | Iterable[int]) -> float:
    """Population standard deviation of the per-combination counts."""
    values = list(counts.values()) if isinstance(counts, Mapping) else list(counts)
    if not values:
        raise EmptyInput("counts")
    from .records import population_std

    return population_std(values)


def plan_to_dict(plan: DistributionPlan) -> dict:
    return {
        "mode": plan.mode,
        "seed": plan.seed,
        "floor_share": plan.floor_share,
        "source_counts": dict(plan.source_counts),
        "target_counts": dict(plan.target_counts),
        "upsampled_keys": sorted(plan.upsampled_keys),
    }


def save_plan(plan: DistributionPlan, path: str | Path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2) + "\n",
                          encoding="utf-8")


def load_plan(path: str | Path) -> DistributionPlan:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    plan = DistributionPlan(
        mode=data["mode"],
        target_counts={k: int(v) for k, v in data["target_counts"].items()},
        source_counts={k: int(v) for k, v in data["source_counts"].items()},
        seed=int(data["seed"]),
        floor_share=data["floor_share"],
        upsampled_keys=frozenset(data["upsampled_keys"]),
    )
    plan.validate()
    return plan
