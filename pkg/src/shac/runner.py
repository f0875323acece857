"""Drive an ask/tell optimizer against an objective with a pool of workers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .objective import Direction, Objective
from .shac import AdoptionEvent, TrialRecord


class EvaluationError(RuntimeError):
    def __init__(self, trial: int, point, cause: BaseException) -> None:
        super().__init__(f"trial {trial} at {point!r} failed: {cause!r}")
        self.trial = trial
        self.point = point


@dataclass
class RunResult:
    """Trial records carry the objective's own values (not the negated ones)."""

    records: list[TrialRecord]
    events: list[AdoptionEvent]


def run(optimizer, objective: Objective, workers: int | None = None) -> RunResult:
    """Run ``optimizer`` until its budget is spent.

    Evaluations inside a batch run concurrently; results are put back in ask
    order before ``tell``, so the run is deterministic for a fixed seed.
    """
    sign = 1.0 if objective.direction is Direction.MAXIMIZE else -1.0
    raw: list[float] = []
    with ThreadPoolExecutor(max_workers=workers or 1) as pool:
        while not optimizer.done:
            batch = optimizer.ask()
            points = [o.point for o in batch]
            futures = [pool.submit(objective, p) for p in points]
            values = []
            for i, (p, fut) in enumerate(zip(points, futures)):
                try:
                    values.append(fut.result())
                except Exception as exc:
                    raise EvaluationError(optimizer.trials_issued - len(points) + i, p, exc) from exc
            raw.extend(values)
            optimizer.tell([(p, sign * v) for p, v in zip(points, values)])
    records = [replace(r, value=float(v)) for r, v in zip(optimizer.log, raw)]
    return RunResult(records, list(optimizer.events))
