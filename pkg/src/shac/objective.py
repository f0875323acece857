"""Black-box objectives and the closed-form synthetic benchmarks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .space import InvalidPointError, Point, SearchSpace


class Direction(str, enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class DomainError(ValueError):
    """Raised when a benchmark is evaluated outside its domain."""


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class Objective:
    """A named black-box function over a search space."""

    name: str
    space: SearchSpace
    fn: Callable[[Point], float]
    direction: Direction = Direction.MAXIMIZE

    def __call__(self, point: Point) -> float:
        return self.fn(point)


@dataclass(frozen=True)
class BudgetConfig:
    """``total`` evaluations split into ``total // workers`` synchronous batches."""

    total: int
    workers: int

    def __post_init__(self) -> None:
        if self.total < 1 or self.workers < 1:
            raise ConfigurationError("budget and workers must be positive")
        if self.total % self.workers:
            raise ConfigurationError(
                f"workers ({self.workers}) must divide the total budget ({self.total})"
            )

    @property
    def n_batches(self) -> int:
        return self.total // self.workers


def as_maximization(obj: Objective) -> Objective:
    if obj.direction is Direction.MAXIMIZE:
        return obj
    fn = obj.fn
    return Objective(obj.name, obj.space, lambda x: -fn(x), Direction.MAXIMIZE)


BRANIN_SPACE = SearchSpace.box([(-5.0, 10.0), (0.0, 15.0)])
HARTMANN6_SPACE = SearchSpace.box([(0.0, 1.0)] * 6)

_HART_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HART_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HART_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)


def _checked(space: SearchSpace, x) -> np.ndarray:
    try:
        space.validate(tuple(x))
    except InvalidPointError as exc:
        raise DomainError(str(exc)) from None
    return np.asarray(x, dtype=float)


def branin(x) -> float:
    """Branin-Hoo on [-5, 10] x [0, 15]; global minimum 0.397887."""
    x1, x2 = _checked(BRANIN_SPACE, x)
    b = 5.1 / (4 * np.pi**2)
    c = 5 / np.pi
    t = 1 / (8 * np.pi)
    return float((x2 - b * x1**2 + c * x1 - 6) ** 2 + 10 * (1 - t) * np.cos(x1) + 10)


def hartmann6(x) -> float:
    """Six-dimensional Hartmann function on the unit cube; minimum -3.32237."""
    x = _checked(HARTMANN6_SPACE, x)
    inner = np.sum(_HART_A * (x - _HART_P) ** 2, axis=1)
    return float(-np.sum(_HART_ALPHA * np.exp(-inner)))


BENCHMARKS: dict[str, Objective] = {
    "branin": Objective("branin", BRANIN_SPACE, branin, Direction.MINIMIZE),
    "hartmann6": Objective("hartmann6", HARTMANN6_SPACE, hartmann6, Direction.MINIMIZE),
}


def get_benchmark(name: str) -> Objective:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown objective {name!r}; choose from {sorted(BENCHMARKS)}"
        ) from None
