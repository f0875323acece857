import pytest

from shac.baseline import RandomSearch
from shac.objective import BudgetConfig, Direction, Objective, get_benchmark
from shac.runner import EvaluationError, run
from shac.shac import Shac, ShacConfig


def test_records_keep_raw_values_and_minimize_sign():
    obj = get_benchmark("branin")
    calls = []

    def counted(x):
        calls.append(x)
        return obj(x)

    wrapped = Objective("branin", obj.space, counted, Direction.MINIMIZE)
    opt = Shac(obj.space, ShacConfig(BudgetConfig(60, 20), cv_enabled=False, seed=0))
    told = []
    inner = opt.tell
    opt.tell = lambda results: told.extend(v for _, v in results) or inner(results)
    res = run(opt, wrapped, 4)
    assert len(calls) == 60
    assert [r.value for r in res.records] == [obj(r.point) for r in res.records]
    assert told == [-r.value for r in res.records]


def test_parallel_run_is_deterministic():
    obj = get_benchmark("hartmann6")
    a = run(Shac(obj.space, ShacConfig(BudgetConfig(80, 20), seed=5)), obj, 8)
    b = run(Shac(obj.space, ShacConfig(BudgetConfig(80, 20), seed=5)), obj, 1)
    assert a.records == b.records and a.events == b.events


def test_evaluation_error_names_trial():
    obj = get_benchmark("branin")
    seen = []

    def flaky(x):
        seen.append(x)
        if len(seen) == 25:
            raise RuntimeError("boom")
        return 0.0

    bad = Objective("flaky", obj.space, flaky, Direction.MAXIMIZE)
    with pytest.raises(EvaluationError) as exc:
        run(RandomSearch(obj.space, BudgetConfig(40, 20), 0), bad, 1)
    assert exc.value.trial == 24
    assert "boom" in str(exc.value)


def test_domain_errors_surface():
    obj = get_benchmark("branin")
    outside = Objective("outside", obj.space, lambda x: obj((x[0] + 100.0, x[1])), Direction.MINIMIZE)
    with pytest.raises(EvaluationError):
        run(RandomSearch(obj.space, BudgetConfig(20, 20), 0), outside, 2)
