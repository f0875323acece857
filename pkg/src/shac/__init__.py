"""Batch black-box optimization with a cascade of boosted-tree classifiers."""

from .baseline import RandomSearch
from .cascade import Cascade, SamplingExhausted
from .objective import BudgetConfig, Direction, Objective, get_benchmark
from .runner import run
from .shac import Shac, ShacConfig, derive_schedule
from .space import Categorical, ContinuousUniform, DiscreteOrdinal, SearchSpace

__all__ = [
    "BudgetConfig",
    "Cascade",
    "Categorical",
    "ContinuousUniform",
    "Direction",
    "DiscreteOrdinal",
    "Objective",
    "RandomSearch",
    "SamplingExhausted",
    "SearchSpace",
    "Shac",
    "ShacConfig",
    "derive_schedule",
    "get_benchmark",
    "run",
]
__version__ = "0.1.0"
