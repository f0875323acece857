"""Random search baselines (RS, and RS-2X with twice the evaluations)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .cascade import Cascade, SampleOutcome, sample_batch
from .objective import BudgetConfig
from .shac import BudgetExhausted, ProtocolError, TrialRecord
from .space import Point, SearchSpace


def doubled(budget: BudgetConfig) -> BudgetConfig:
    """The RS-2X budget: twice the evaluations with the same worker count."""
    return BudgetConfig(2 * budget.total, budget.workers)


class RandomSearch:
    """Batch ask/tell random search over the prior.

    Uses the same prior sampler and seed derivation as :class:`~shac.shac.Shac`,
    so for equal seeds the two propose identical first batches.
    """

    def __init__(self, space: SearchSpace, budget: BudgetConfig, seed: int = 0) -> None:
        self.space = space
        self.budget = budget
        sample_seq, _ = np.random.SeedSequence(seed).spawn(2)
        self._rng = np.random.default_rng(sample_seq)
        self._prior = Cascade(space)
        self.trials_issued = 0
        self.batches_completed = 0
        self.log: list[TrialRecord] = []
        self.events: list = []
        self._outstanding: list[SampleOutcome] | None = None

    @property
    def done(self) -> bool:
        return self.trials_issued >= self.budget.total and self._outstanding is None

    def ask(self) -> list[SampleOutcome]:
        if self._outstanding is not None:
            raise ProtocolError("previous batch has not been told yet")
        if self.trials_issued + self.budget.workers > self.budget.total:
            raise BudgetExhausted("budget fully issued")
        self._outstanding = sample_batch(self._prior, self._rng, self.budget.workers)
        self.trials_issued += self.budget.workers
        return list(self._outstanding)

    def tell(self, results: Sequence[tuple[Point, float]]) -> None:
        if self._outstanding is None:
            raise ProtocolError("tell called without an outstanding batch")
        if len(results) != len(self._outstanding) or any(
            tuple(p) != o.point for (p, _), o in zip(results, self._outstanding)
        ):
            raise ProtocolError("results do not match the outstanding batch")
        for (_, value), o in zip(results, self._outstanding):
            self.log.append(
                TrialRecord(len(self.log), self.batches_completed, o.point, float(value), o.attempts, 0)
            )
        self._outstanding = None
        self.batches_completed += 1
