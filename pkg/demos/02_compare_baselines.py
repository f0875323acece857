# SHAC against random search at equal and doubled budgets.
#
# Runs five seeds of each algorithm on both benchmarks (a few minutes on one
# core) and prints the same kind of table as ``shac compare``.

# %%
import logging

from shac.analysis import best_value, mean_stderr, median_trend, per_batch_median
from shac.baseline import RandomSearch, doubled
from shac.objective import BudgetConfig, get_benchmark
from shac.runner import run
from shac.shac import Shac, ShacConfig

logging.basicConfig(level=logging.WARNING)
SEEDS = range(5)


def make(algo, space, budget, seed):
    if algo == "SHAC":
        return Shac(space, ShacConfig(budget, cv_enabled=False, seed=seed))
    return RandomSearch(space, doubled(budget) if algo == "RS-2X" else budget, seed)


# %%
results = {}
for bench in ("branin", "hartmann6"):
    obj = get_benchmark(bench)
    for total, workers in ((400, 20), (200, 10)):
        print(f"\n{bench}  {total // workers} batches x {workers} workers")
        for algo in ("RS", "RS-2X", "SHAC"):
            runs = [run(make(algo, obj.space, BudgetConfig(total, workers), s), obj, workers) for s in SEEDS]
            results[bench, total, algo] = runs
            m, se = mean_stderr(best_value(r.records, obj.direction) for r in runs)
            print(f"  {algo:<6} {m:8.4f} ± {se:.4f}")

# %%
# Batch medians: SHAC's proposals get better as the cascade grows, random
# search stays where it started.
for bench in ("branin", "hartmann6"):
    for algo in ("RS", "SHAC"):
        trends = [median_trend(per_batch_median(r.records)) for r in results[bench, 400, algo]]
        slopes = ", ".join(f"{t.slope:+.3f} (p={t.pvalue:.2f})" for t in trends)
        print(f"{bench:<10} {algo:<5} {slopes}")
