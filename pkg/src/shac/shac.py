"""The SHAC optimizer: successive halving of the search space by classification.

Each stage evaluates batches of points drawn (by rejection) from the region
accepted by every classifier adopted so far. Once enough points have been
evaluated, they are split at their median objective value and a new
boosted-tree classifier learns to tell the better half from the worse; it
then joins the cascade. After ``K`` adoptions the cascade is frozen and the
remaining budget is spent sampling from the final region.

Typical use::

    opt = Shac(space, ShacConfig(BudgetConfig(400, 20), cv_enabled=False))
    while not opt.done:
        batch = opt.ask()
        opt.tell([(o.point, f(o.point)) for o in batch])
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import gbt
from .cascade import Cascade, SampleOutcome, SamplingExhausted, default_max_attempts, sample_batch
from .objective import BudgetConfig, ConfigurationError
from .space import Point, SearchSpace

log = logging.getLogger(__name__)


class BudgetExhausted(RuntimeError):
    """Raised by ``ask`` once the whole budget has been issued."""


class ProtocolError(RuntimeError):
    """ask/tell called out of order, or tell given the wrong batch."""


class DegenerateBufferError(ValueError):
    """All buffered objective values are equal, so no split exists."""


class Schedule(NamedTuple):
    n_batches: int
    max_classifiers: int
    classifier_budget: int


def derive_schedule(budget: BudgetConfig, cap: int = 18) -> Schedule:
    """Batch count ``m``, classifier count ``K`` and per-classifier budget ``T_c``.

    >>> derive_schedule(BudgetConfig(8000, 100), 18)
    Schedule(n_batches=80, max_classifiers=18, classifier_budget=400)
    """
    if cap < 0:
        raise ConfigurationError("classifier cap must be non-negative")
    m = budget.n_batches
    k = min(m - 1, cap)
    w = budget.workers
    return Schedule(m, k, w * (budget.total // (w * (k + 1))))


@dataclass(frozen=True)
class ShacConfig:
    budget: BudgetConfig
    max_classifiers_cap: int = 18
    cv_folds: int = 5
    cv_enabled: bool = True
    cv_threshold: float = 0.5
    gbt: gbt.GbtConfig = field(default_factory=gbt.GbtConfig)
    max_attempts: int | None = None
    seed: int = 0

    @property
    def schedule(self) -> Schedule:
        return derive_schedule(self.budget, self.max_classifiers_cap)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    batch: int
    point: Point
    value: float
    attempts: int
    cascade_size: int

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "batch": self.batch,
            "point": list(self.point),
            "value": self.value,
            "attempts": self.attempts,
            "cascade_size": self.cascade_size,
        }


@dataclass(frozen=True)
class AdoptionEvent:
    batch: int
    cascade_size: int
    cv_accuracy: float | None

    def to_json(self) -> dict:
        return {
            "event": "adopt",
            "batch": self.batch,
            "cascade_size": self.cascade_size,
            "cv_accuracy": self.cv_accuracy,
        }


def binarize(space: SearchSpace, buffer: Sequence[tuple[Point, float]]) -> gbt.LabeledDataset:
    """Label each point +1 if its value is at or above the buffer median, else -1."""
    if not buffer:
        raise ValueError("cannot binarize an empty buffer")
    y = np.array([v for _, v in buffer], dtype=float)
    labels = np.where(y >= np.median(y), 1, -1)
    if np.all(labels == 1):
        raise DegenerateBufferError("all buffered values are equal")
    features = space.encode_array(np.array([p for p, _ in buffer], dtype=float))
    return gbt.LabeledDataset(features, labels)


class Shac:
    """Batch ask/tell SHAC optimizer. Objective values are maximized."""

    def __init__(self, space: SearchSpace, config: ShacConfig) -> None:
        self.space = space
        self.config = config
        self.schedule = config.schedule
        self.max_attempts = config.max_attempts or default_max_attempts(
            self.schedule.max_classifiers
        )
        sample_seq, cv_seq = np.random.SeedSequence(config.seed).spawn(2)
        self._sample_rng = np.random.default_rng(sample_seq)
        self._cv_rng = np.random.default_rng(cv_seq)
        self.cascade = Cascade(space)
        self.buffer: list[tuple[Point, float]] = []
        self.trials_issued = 0
        self.batches_completed = 0
        self.frozen = self.schedule.max_classifiers == 0
        self.log: list[TrialRecord] = []
        self.events: list[AdoptionEvent] = []
        self.gate_failures = 0
        self._outstanding: list[tuple[SampleOutcome, int]] | None = None

    @property
    def done(self) -> bool:
        return self.trials_issued >= self.config.budget.total and self._outstanding is None

    def ask(self) -> list[SampleOutcome]:
        """Propose the next batch of ``W`` points from the surviving region."""
        if self._outstanding is not None:
            raise ProtocolError("previous batch has not been told yet")
        w = self.config.budget.workers
        if self.trials_issued + w > self.config.budget.total:
            raise BudgetExhausted("budget fully issued")
        batch: list[tuple[SampleOutcome, int]] = []
        k = len(self.cascade)
        while len(batch) < w:
            try:
                got = sample_batch(self.cascade, self._sample_rng, w - len(batch), self.max_attempts)
                batch.extend((o, k) for o in got)
            except SamplingExhausted as exc:
                batch.extend((o, k) for o in exc.accepted)
                if k == 0:
                    raise
                # Fall back to the cascade without its newest classifier, for this draw only.
                log.warning("sampling exhausted with %d classifiers; retrying with %d", k, k - 1)
                retry = sample_batch(self.cascade.prefix(k - 1), self._sample_rng, 1, self.max_attempts)[0]
                batch.append((SampleOutcome(retry.point, retry.attempts + exc.attempts), k - 1))
        self._outstanding = batch
        self.trials_issued += w
        return [o for o, _ in batch]

    def tell(self, results: Sequence[tuple[Point, float]]) -> AdoptionEvent | None:
        """Report values for the outstanding batch, in ask order.

        Returns the adoption event if a new classifier joined the cascade.
        """
        if self._outstanding is None:
            raise ProtocolError("tell called without an outstanding batch")
        if len(results) != len(self._outstanding) or any(
            tuple(p) != o.point for (p, _), (o, _) in zip(results, self._outstanding)
        ):
            raise ProtocolError("results do not match the outstanding batch")
        batch_index = self.batches_completed
        for (_, value), (o, k) in zip(results, self._outstanding):
            value = float(value)
            self.log.append(TrialRecord(len(self.log), batch_index, o.point, value, o.attempts, k))
            self.buffer.append((o.point, value))
        self._outstanding = None
        self.batches_completed += 1
        if self.frozen or len(self.buffer) < self.schedule.classifier_budget:
            return None
        return self._try_adopt(batch_index)

    def _try_adopt(self, batch_index: int) -> AdoptionEvent | None:
        try:
            dataset = binarize(self.space, self.buffer)
        except DegenerateBufferError:
            log.info("batch %d: degenerate buffer, keeping %d points", batch_index, len(self.buffer))
            return None
        cfg = self.config
        accuracy = None
        if cfg.cv_enabled:
            if len(dataset) < cfg.cv_folds:
                return None
            accuracy = gbt.cross_val_accuracy(dataset, cfg.cv_folds, cfg.gbt, self._cv_rng)
            if accuracy < cfg.cv_threshold:
                self.gate_failures += 1
                log.info("batch %d: cv accuracy %.3f below gate", batch_index, accuracy)
                return None
        model = gbt.fit(dataset, cfg.gbt)
        self.cascade = self.cascade.extended(model)
        self.buffer = []
        if len(self.cascade) >= self.schedule.max_classifiers:
            self.frozen = True
        event = AdoptionEvent(batch_index, len(self.cascade), accuracy)
        self.events.append(event)
        return event
