import math

import numpy as np
import pytest

from shac import analysis
from shac.analysis import UnsupportedSpaceError
from shac.objective import Direction
from shac.shac import TrialRecord
from shac.space import Categorical, ContinuousUniform, DiscreteOrdinal, SearchSpace


def recs(values, batch_size=None):
    bs = batch_size or len(values)
    return [TrialRecord(i, i // bs, (float(i),), float(v), 1, 0) for i, v in enumerate(values)]


def test_best_and_top_k():
    r = recs([3.0, 1.0, 4.0, 1.5, 9.0, 2.0])
    assert analysis.best_value(r, Direction.MAXIMIZE) == 9.0
    assert analysis.best_value(r, Direction.MINIMIZE) == 1.0
    assert analysis.top_k_mean(r, 2, Direction.MINIMIZE) == 1.25
    assert analysis.top_k_mean(r, 3) == pytest.approx(16 / 3)
    with pytest.raises(ValueError):
        analysis.top_k_mean(r, 7)


def test_top_k_monotone_in_k():
    r = recs(np.random.default_rng(0).normal(size=50))
    means = [analysis.top_k_mean(r, k) for k in range(1, 51)]
    assert all(a >= b for a, b in zip(means, means[1:]))


def test_per_batch_median():
    r = recs([1, 2, 3, 10, 20, 30, 5, 5, 6], batch_size=3)
    assert analysis.per_batch_median(r) == [2.0, 20.0, 5.0]
    with pytest.raises(ValueError):
        analysis.per_batch_median(r[:-1])
    assert analysis.per_batch_median([]) == []


def test_shortlist_ties_go_to_earlier_trial():
    r = recs([5.0, 7.0, 7.0, 1.0])
    assert analysis.select_shortlist(r, 2) == [(1.0,), (2.0,)]
    assert analysis.select_shortlist(r, 1, Direction.MINIMIZE) == [(3.0,)]
    with pytest.raises(ValueError):
        analysis.select_shortlist(r, 5)


def test_hamming_hand_example():
    space = SearchSpace([Categorical(2)] * 3)
    assert analysis.hamming_histogram([(0, 0, 0), (0, 0, 1), (0, 1, 1)], space) == {1: 2, 2: 1}


def test_hamming_mass_and_ordinal_codes():
    space = SearchSpace([DiscreteOrdinal((1, 10, 100)), Categorical(4)])
    pts = [space.sample(np.random.default_rng(i)) for i in range(12)]
    hist = analysis.hamming_histogram(pts, space)
    assert sum(hist.values()) == math.comb(12, 2)
    assert set(hist) <= {0, 1, 2}


def test_hamming_mean_distance_law():
    d, v = 40, 3
    space = SearchSpace([Categorical(v)] * d)
    pts = [space.to_point(r) for r in space.sample_array(np.random.default_rng(1), 800)]
    got = analysis.mean_distance(analysis.hamming_histogram(pts, space))
    assert got == pytest.approx(d * (1 - 1 / v), rel=0.02)


def test_hamming_rejects_continuous():
    space = SearchSpace([ContinuousUniform(0.0, 1.0), Categorical(2)])
    with pytest.raises(UnsupportedSpaceError):
        analysis.hamming_histogram([(0.5, 0)], space)


def test_median_trend():
    up = analysis.median_trend(np.arange(20) * 0.5 + np.random.default_rng(0).normal(scale=0.1, size=20))
    assert up.slope == pytest.approx(0.5, abs=0.05) and up.improving() and not up.flat()
    assert not up.improving(Direction.MINIMIZE)
    noise = analysis.median_trend(np.random.default_rng(3).normal(size=20))
    assert noise.flat()


def test_mean_stderr():
    m, se = analysis.mean_stderr([1.0, 2.0, 3.0, 4.0])
    assert m == 2.5
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    assert analysis.mean_stderr([7.0]) == (7.0, 0.0)
    with pytest.raises(ValueError):
        analysis.mean_stderr([])


def test_summarize_small_run():
    s = analysis.summarize(recs([4, 3, 2], batch_size=3), Direction.MINIMIZE)
    assert (s.n_trials, s.best_value, s.top5_mean, s.per_batch_median) == (3, 2.0, 3.0, [3.0])


def test_csv_writers(tmp_path):
    analysis.write_medians_csv(tmp_path / "m.csv", [1.5, 0.25])
    assert (tmp_path / "m.csv").read_text().splitlines() == ["batch_index,median", "0,1.5", "1,0.25"]
    analysis.write_histogram_csv(tmp_path / "h.csv", {2: 1, 1: 2})
    assert (tmp_path / "h.csv").read_text().splitlines() == ["distance,count", "1,2", "2,1"]
