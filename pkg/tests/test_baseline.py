import numpy as np
import pytest

from shac.baseline import RandomSearch, doubled
from shac.objective import BudgetConfig, get_benchmark
from shac.runner import run
from shac.shac import BudgetExhausted, ProtocolError, Shac, ShacConfig


def test_doubled():
    assert doubled(BudgetConfig(200, 10)) == BudgetConfig(400, 10)


def test_first_batch_matches_shac():
    space = get_benchmark("hartmann6").space
    rs = RandomSearch(space, BudgetConfig(100, 20), seed=4)
    sh = Shac(space, ShacConfig(BudgetConfig(100, 20), seed=4))
    assert [o.point for o in rs.ask()] == [o.point for o in sh.ask()]


def test_proposals_ignore_values():
    space = get_benchmark("branin").space
    a = RandomSearch(space, BudgetConfig(60, 20), seed=1)
    b = RandomSearch(space, BudgetConfig(60, 20), seed=1)
    rng = np.random.default_rng(0)
    while not a.done:
        pa, pb = a.ask(), b.ask()
        assert [o.point for o in pa] == [o.point for o in pb]
        a.tell([(o.point, 0.0) for o in pa])
        b.tell([(o.point, float(rng.normal())) for o in pb])


def test_stream_independent_of_worker_count():
    obj = get_benchmark("branin")
    p10 = [r.point for r in run(RandomSearch(obj.space, BudgetConfig(200, 10), 2), obj, 10).records]
    p20 = [r.point for r in run(RandomSearch(obj.space, BudgetConfig(200, 20), 2), obj, 20).records]
    p2x = [r.point for r in run(RandomSearch(obj.space, doubled(BudgetConfig(200, 10)), 2), obj, 10).records]
    assert p10 == p20 == p2x[:200]


def test_log_and_budget():
    obj = get_benchmark("branin")
    opt = RandomSearch(obj.space, BudgetConfig(40, 20), seed=0)
    res = run(opt, obj, 20)
    assert len(res.records) == 40 and res.events == []
    assert {r.cascade_size for r in res.records} == {0}
    assert [r.batch for r in res.records] == [0] * 20 + [1] * 20
    with pytest.raises(BudgetExhausted):
        opt.ask()


def test_protocol_errors():
    space = get_benchmark("branin").space
    opt = RandomSearch(space, BudgetConfig(40, 20), seed=0)
    with pytest.raises(ProtocolError):
        opt.tell([])
    batch = opt.ask()
    with pytest.raises(ProtocolError):
        opt.ask()
    with pytest.raises(ProtocolError):
        opt.tell([(o.point, 0.0) for o in batch[:-1]])
