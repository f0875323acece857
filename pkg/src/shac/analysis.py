"""Statistics over trial logs: best and top-k values, batch medians, diversity."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .objective import Direction
from .shac import TrialRecord
from .space import Point, SearchSpace


class UnsupportedSpaceError(ValueError):
    pass


def _sign(direction: Direction) -> float:
    return 1.0 if Direction(direction) is Direction.MAXIMIZE else -1.0


def best_value(records: Sequence[TrialRecord], direction=Direction.MAXIMIZE) -> float:
    return top_k_mean(records, 1, direction)


def top_k_mean(records: Sequence[TrialRecord], k: int, direction=Direction.MAXIMIZE) -> float:
    """Mean of the ``k`` best values under ``direction``."""
    if not 1 <= k <= len(records):
        raise ValueError(f"k={k} needs 1 <= k <= {len(records)} trials")
    s = _sign(direction)
    vals = sorted((r.value for r in records), key=lambda v: -s * v)
    return float(np.mean(vals[:k]))


def per_batch_median(records: Sequence[TrialRecord]) -> list[float]:
    by_batch: dict[int, list[float]] = {}
    for r in records:
        by_batch.setdefault(r.batch, []).append(r.value)
    if not by_batch:
        return []
    sizes = {len(v) for v in by_batch.values()}
    if len(sizes) > 1:
        raise ValueError(f"batches have unequal sizes {sorted(sizes)}; log is incomplete")
    return [float(np.median(by_batch[b])) for b in sorted(by_batch)]


def select_shortlist(
    records: Sequence[TrialRecord], size: int, direction=Direction.MAXIMIZE
) -> list[Point]:
    """Points of the ``size`` best trials; ties go to the earlier trial."""
    if not 0 <= size <= len(records):
        raise ValueError(f"shortlist size {size} exceeds {len(records)} trials")
    s = _sign(direction)
    ranked = sorted(records, key=lambda r: (-s * r.value, r.trial))
    return [r.point for r in ranked[:size]]


def hamming_histogram(points: Sequence[Point], space: SearchSpace) -> dict[int, int]:
    """Counts of pairwise coordinate-disagreement distances over all unordered pairs."""
    if not space.is_discrete:
        raise UnsupportedSpaceError("Hamming distances need a fully discrete space")
    for p in points:
        space.validate(p)
    codes = np.asarray(points, dtype=np.int64).reshape(len(points), space.n_dims)
    counts: Counter = Counter()
    for i in range(len(codes) - 1):
        d = np.count_nonzero(codes[i + 1 :] != codes[i], axis=1)
        counts.update(d.tolist())
    return dict(sorted(counts.items()))


def mean_distance(histogram: dict[int, int]) -> float:
    total = sum(histogram.values())
    return sum(d * c for d, c in histogram.items()) / total


@dataclass(frozen=True)
class Trend:
    slope: float
    pvalue: float

    def improving(self, direction=Direction.MAXIMIZE) -> bool:
        return _sign(direction) * self.slope > 0

    def flat(self, alpha: float = 0.05) -> bool:
        """The slope is not significantly different from zero."""
        return self.pvalue >= alpha


def median_trend(medians: Sequence[float]) -> Trend:
    """Ordinary least-squares slope of batch medians against batch index."""
    res = stats.linregress(np.arange(len(medians)), np.asarray(medians, dtype=float))
    return Trend(float(res.slope), float(res.pvalue))


@dataclass(frozen=True)
class RunSummary:
    n_trials: int
    best_value: float
    top5_mean: float
    per_batch_median: list

    def to_json(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "best_value": self.best_value,
            "top5_mean": self.top5_mean,
            "per_batch_median": self.per_batch_median,
        }


def summarize(records: Sequence[TrialRecord], direction=Direction.MAXIMIZE) -> RunSummary:
    return RunSummary(
        n_trials=len(records),
        best_value=best_value(records, direction),
        top5_mean=top_k_mean(records, min(5, len(records)), direction),
        per_batch_median=per_batch_median(records),
    )


def mean_stderr(values: Iterable[float]) -> tuple[float, float]:
    """Mean and standard error (sample std / sqrt(n)); stderr is 0 for one value."""
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("no values")
    if v.size == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))


def write_medians_csv(path: Path, medians: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["batch_index", "median"])
        for i, m in enumerate(medians):
            w.writerow([i, repr(float(m))])


def write_histogram_csv(path: Path, histogram: dict[int, int]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["distance", "count"])
        for d, c in sorted(histogram.items()):
            w.writerow([d, c])
