import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shac.space import (
    Categorical,
    ContinuousUniform,
    DiscreteOrdinal,
    InvalidPointError,
    SearchSpace,
)


def test_domain_validation():
    with pytest.raises(ValueError):
        ContinuousUniform(1.0, 1.0)
    with pytest.raises(ValueError):
        ContinuousUniform(0.0, float("inf"))
    with pytest.raises(ValueError):
        DiscreteOrdinal(())
    with pytest.raises(ValueError):
        DiscreteOrdinal((0.1, 0.1, 1.0))
    with pytest.raises(ValueError):
        Categorical(1)
    with pytest.raises(ValueError):
        SearchSpace([])


def test_sample_unit_interval(unit_space):
    rng = np.random.default_rng(3)
    for _ in range(100):
        (x,) = unit_space.sample(rng)
        assert 0.0 <= x <= 1.0


def test_sample_branin_box():
    space = SearchSpace.box([(-5.0, 10.0), (0.0, 15.0)])
    pts = space.sample_array(np.random.default_rng(0), 10_000)
    assert pts[:, 0].min() >= -5.0 and pts[:, 0].max() <= 10.0
    assert pts[:, 1].min() >= 0.0 and pts[:, 1].max() <= 15.0


def test_categorical_frequencies():
    space = SearchSpace([Categorical(4)])
    draws = space.sample_array(np.random.default_rng(11), 100_000)[:, 0].astype(int)
    freq = np.bincount(draws, minlength=4) / draws.size
    np.testing.assert_allclose(freq, 0.25, atol=0.01)


def test_batched_sampling_matches_one_at_a_time():
    space = SearchSpace([ContinuousUniform(-1.0, 2.0), Categorical(3), DiscreteOrdinal((1, 2, 4))])
    batch = space.sample_array(np.random.default_rng(5), 50)
    rng = np.random.default_rng(5)
    single = [space.sample(rng) for _ in range(50)]
    assert [space.to_point(r) for r in batch] == single


def test_same_seed_same_point():
    space = SearchSpace([ContinuousUniform(0.0, 3.0), Categorical(5)])
    assert space.sample(np.random.default_rng(9)) == space.sample(np.random.default_rng(9))


def test_continuous_recipe():
    space = SearchSpace([ContinuousUniform(2.0, 6.0)])
    u = np.random.default_rng(1).random()
    assert space.sample(np.random.default_rng(1)) == (2.0 + u * 4.0,)


@pytest.mark.parametrize(
    "dim, coord, expected",
    [
        (ContinuousUniform(0.0, 1.0), 0.3, [0.3]),
        (DiscreteOrdinal((0.01, 0.1, 1.0)), 1, [0.1]),
        (Categorical(3), 2, [0.0, 0.0, 1.0]),
    ],
)
def test_encode_examples(dim, coord, expected):
    np.testing.assert_array_equal(SearchSpace([dim]).encode((coord,)), expected)


def test_encode_rejects_bad_points():
    space = SearchSpace([ContinuousUniform(0.0, 1.0), Categorical(3)])
    with pytest.raises(InvalidPointError):
        space.encode((0.5,))
    with pytest.raises(InvalidPointError):
        space.encode((0.5, 3))
    with pytest.raises(InvalidPointError):
        space.encode((1.5, 0))
    with pytest.raises(InvalidPointError):
        space.encode((0.5, 1.5))


domains = st.one_of(
    st.tuples(st.floats(-100, 100), st.floats(0.1, 50)).map(lambda t: ContinuousUniform(t[0], t[0] + t[1])),
    st.lists(st.floats(-10, 10), min_size=1, max_size=6, unique=True).map(
        lambda v: DiscreteOrdinal(tuple(sorted(v)))
    ),
    st.integers(2, 7).map(Categorical),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(domains, min_size=1, max_size=6), st.integers(0, 2**32 - 1))
def test_feature_length_and_determinism(dims, seed):
    space = SearchSpace(dims)
    expected_len = sum(d.n_choices if isinstance(d, Categorical) else 1 for d in dims)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        p = space.sample(rng)
        assert space.contains(p)
        f = space.encode(p)
        assert f.shape == (expected_len,)
        np.testing.assert_array_equal(f, space.encode(tuple(p)))
    assert space.encode_array(space.sample_array(rng, 7)).shape == (7, expected_len)
