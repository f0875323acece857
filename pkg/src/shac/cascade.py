"""Classifier cascades and rejection sampling from the surviving region."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .space import Point, SearchSpace

_MIN_CHUNK = 64
_MAX_CHUNK = 1 << 18


class Classifier(Protocol):
    def predict(self, features: np.ndarray) -> np.ndarray:
        """Labels in {-1, +1} for an ``(n, n_features)`` array."""


class SamplingExhausted(RuntimeError):
    """No point passed the cascade within the attempt cap.

    ``accepted`` holds the outcomes drawn before the failing one.
    """

    def __init__(self, attempts: int, accepted: list | None = None) -> None:
        super().__init__(f"no point accepted after {attempts} attempts")
        self.attempts = attempts
        self.accepted = accepted or []


@dataclass(frozen=True)
class SampleOutcome:
    point: Point
    attempts: int


def default_max_attempts(n_classifiers: int) -> int:
    return 2 ** (n_classifiers + 4)


class Cascade:
    """An immutable, ordered conjunction of binary classifiers."""

    def __init__(self, space: SearchSpace, classifiers: Sequence[Classifier] = ()) -> None:
        self.space = space
        self.classifiers = tuple(classifiers)

    def __len__(self) -> int:
        return len(self.classifiers)

    def __repr__(self) -> str:
        return f"Cascade(n_classifiers={len(self)}, n_dims={self.space.n_dims})"

    def extended(self, classifier: Classifier) -> "Cascade":
        return Cascade(self.space, self.classifiers + (classifier,))

    def prefix(self, k: int) -> "Cascade":
        return Cascade(self.space, self.classifiers[:k])

    def passes_array(self, coords: np.ndarray) -> np.ndarray:
        """Boolean mask of rows accepted by every classifier.

        Classifiers run in adoption order and only see rows that survived
        the ones before them.
        """
        alive = np.ones(coords.shape[0], dtype=bool)
        if not self.classifiers:
            return alive
        features = self.space.encode_array(coords)
        idx = np.arange(coords.shape[0])
        for clf in self.classifiers:
            keep = np.asarray(clf.predict(features[idx])) > 0
            alive[idx[~keep]] = False
            idx = idx[keep]
            if idx.size == 0:
                break
        return alive

    def passes(self, point: Point) -> bool:
        self.space.validate(point)
        return bool(self.passes_array(np.asarray(point, dtype=float)[None, :])[0])


def _chunk_size(cascade: Cascade, needed: int) -> int:
    if not cascade.classifiers:
        return needed
    expected = needed * 2 ** len(cascade)
    return int(min(max(_MIN_CHUNK, expected), _MAX_CHUNK))


def sample_batch(
    cascade: Cascade,
    rng: np.random.Generator,
    n: int,
    max_attempts: int | None = None,
) -> list[SampleOutcome]:
    """Draw ``n`` prior points that pass ``cascade``, by rejection.

    Candidates are generated in vectorised chunks from a single stream;
    ``attempts`` counts the prior draws consumed for each accepted point,
    the accepted draw included.
    """
    if max_attempts is None:
        max_attempts = default_max_attempts(len(cascade))
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    out: list[SampleOutcome] = []
    pending = 0  # rejected draws since the last acceptance
    while len(out) < n:
        size = _chunk_size(cascade, n - len(out))
        coords = cascade.space.sample_array(rng, size)
        hits = np.flatnonzero(cascade.passes_array(coords))[: n - len(out)]
        prev = -1
        for i in hits:
            attempts = pending + int(i) - prev
            if attempts > max_attempts:
                raise SamplingExhausted(max_attempts, out)
            out.append(SampleOutcome(cascade.space.to_point(coords[i]), attempts))
            pending, prev = 0, int(i)
        if len(out) < n:
            pending += size - 1 - prev
            if pending >= max_attempts:
                raise SamplingExhausted(max_attempts, out)
    return out


def sample_accepted(
    cascade: Cascade, rng: np.random.Generator, max_attempts: int | None = None
) -> SampleOutcome:
    return sample_batch(cascade, rng, 1, max_attempts)[0]


def pass_rate(cascade: Cascade, rng: np.random.Generator, n_probes: int) -> float:
    """Fraction of fresh prior samples accepted by the cascade."""
    return float(np.mean(cascade.passes_array(cascade.space.sample_array(rng, n_probes))))

