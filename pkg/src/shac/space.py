"""Search spaces with a uniform prior, point sampling and classifier features.

Points are plain tuples: a float for each continuous dimension and an
``int`` index for ordinal and categorical dimensions. Internally batches of
points are carried as ``(n, n_dims)`` float arrays of the same coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

Point = tuple


class InvalidPointError(ValueError):
    """Raised when a point does not belong to its search space."""


@dataclass(frozen=True)
class ContinuousUniform:
    low: float
    high: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ValueError("bounds must be finite")
        if not self.low < self.high:
            raise ValueError(f"low ({self.low}) must be less than high ({self.high})")

    @property
    def n_features(self) -> int:
        return 1

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.low + u * (self.high - self.low)

    def contains(self, value) -> bool:
        return self.low <= value <= self.high


@dataclass(frozen=True)
class DiscreteOrdinal:
    """Ordered grid of values; coordinates are indices into ``values``."""

    values: tuple

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("values must be non-empty")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("values must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @property
    def n_choices(self) -> int:
        return len(self.values)

    @property
    def n_features(self) -> int:
        return 1

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.minimum(np.floor(u * self.n_choices), self.n_choices - 1)

    def contains(self, value) -> bool:
        return _is_index(value, self.n_choices)


@dataclass(frozen=True)
class Categorical:
    n_choices: int

    def __post_init__(self) -> None:
        if int(self.n_choices) != self.n_choices or self.n_choices < 2:
            raise ValueError("n_choices must be an integer >= 2")

    @property
    def n_features(self) -> int:
        return self.n_choices

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.minimum(np.floor(u * self.n_choices), self.n_choices - 1)

    def contains(self, value) -> bool:
        return _is_index(value, self.n_choices)


ParamDomain = Union[ContinuousUniform, DiscreteOrdinal, Categorical]


def _is_index(value, n: int) -> bool:
    if isinstance(value, (bool, np.bool_)):
        return False
    try:
        return float(value).is_integer() and 0 <= int(value) < n
    except (TypeError, ValueError):
        return False


@dataclass(frozen=True)
class SearchSpace:
    """An ordered product of parameter domains under a uniform prior.

    >>> space = SearchSpace([ContinuousUniform(-5.0, 10.0), ContinuousUniform(0.0, 15.0)])
    >>> space.n_dims, space.n_features
    (2, 2)
    """

    dims: tuple = field()

    def __post_init__(self) -> None:
        dims = tuple(self.dims)
        if not dims:
            raise ValueError("a search space needs at least one dimension")
        for d in dims:
            if not isinstance(d, (ContinuousUniform, DiscreteOrdinal, Categorical)):
                raise TypeError(f"unsupported domain {d!r}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def box(cls, bounds: Sequence[tuple[float, float]]) -> "SearchSpace":
        return cls([ContinuousUniform(float(lo), float(hi)) for lo, hi in bounds])

    @property
    def n_dims(self) -> int:
        return len(self.dims)

    @property
    def n_features(self) -> int:
        return sum(d.n_features for d in self.dims)

    @property
    def is_discrete(self) -> bool:
        return not any(isinstance(d, ContinuousUniform) for d in self.dims)

    # -- sampling ---------------------------------------------------------

    def sample_array(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` prior samples as an ``(n, n_dims)`` coordinate array.

        Exactly one uniform double is consumed per dimension, row by row, so
        ``sample_array(rng, n)`` yields the same rows as ``n`` successive
        calls with ``n=1``.
        """
        u = rng.random((n, self.n_dims))
        out = np.empty_like(u)
        for j, d in enumerate(self.dims):
            out[:, j] = d.from_uniform(u[:, j])
        return out

    def sample(self, rng: np.random.Generator) -> Point:
        return self.to_point(self.sample_array(rng, 1)[0])

    # -- conversion -------------------------------------------------------

    def to_point(self, row: np.ndarray) -> Point:
        return tuple(
            float(v) if isinstance(d, ContinuousUniform) else int(v)
            for d, v in zip(self.dims, row)
        )

    def to_array(self, points: Sequence[Point]) -> np.ndarray:
        for p in points:
            self.validate(p)
        return np.asarray(points, dtype=float).reshape(len(points), self.n_dims)

    def validate(self, point: Point) -> None:
        if len(point) != self.n_dims:
            raise InvalidPointError(
                f"point has {len(point)} coordinates, space has {self.n_dims} dimensions"
            )
        for j, (d, v) in enumerate(zip(self.dims, point)):
            if not d.contains(v):
                raise InvalidPointError(f"coordinate {j} = {v!r} outside {d}")

    def contains(self, point: Point) -> bool:
        try:
            self.validate(point)
        except InvalidPointError:
            return False
        return True

    # -- features ---------------------------------------------------------

    def encode(self, point: Point) -> np.ndarray:
        """Feature vector of one point (ordinals by value, categoricals one-hot)."""
        self.validate(point)
        return self.encode_array(np.asarray(point, dtype=float)[None, :])[0]

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != self.n_dims:
            raise InvalidPointError(f"expected shape (n, {self.n_dims}), got {coords.shape}")
        if all(isinstance(d, ContinuousUniform) for d in self.dims):
            return coords.copy()
        n = coords.shape[0]
        out = np.zeros((n, self.n_features))
        col = 0
        for j, d in enumerate(self.dims):
            if isinstance(d, ContinuousUniform):
                out[:, col] = coords[:, j]
            elif isinstance(d, DiscreteOrdinal):
                out[:, col] = np.asarray(d.values)[coords[:, j].astype(int)]
            else:
                out[np.arange(n), col + coords[:, j].astype(int)] = 1.0
            col += d.n_features
        return out
