"""Experiment runner.

    shac run --config configs/branin_20x20_shac.json [--seed-override 7 ...]
    shac compare runs/a runs/b ...
    shac analyze runs/a --medians | --hamming [--shortlist 50]

A run config is a flat JSON object::

    {"algorithm": "shac", "objective": "branin", "budget": 400, "workers": 20,
     "seeds": [0, 1, 2, 3, 4], "cv_enabled": false, "output_dir": "out/branin"}

Optional SHAC keys: ``cap``, ``cv_folds``, ``cv_threshold``, ``max_attempts``
and the tree settings ``n_rounds``, ``max_depth``, ``learning_rate``,
``reg_lambda``, ``min_child_hessian``, ``min_split_gain``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import analysis
from .baseline import RandomSearch, doubled
from .gbt import GbtConfig
from .objective import BudgetConfig, ConfigurationError, get_benchmark
from .runner import EvaluationError, RunResult, run as run_optimizer
from .shac import Shac, ShacConfig, TrialRecord

log = logging.getLogger("shac")

ALGORITHMS = ("shac", "rs", "rs2x")
_GBT_KEYS = ("n_rounds", "max_depth", "learning_rate", "reg_lambda", "min_child_hessian", "min_split_gain")
_KNOWN = {
    "algorithm", "objective", "budget", "workers", "seeds", "output_dir",
    "cap", "cv_enabled", "cv_folds", "cv_threshold", "max_attempts", *_GBT_KEYS,
}


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    objective: str
    budget: int
    workers: int
    seeds: tuple
    output_dir: Path
    cap: int = 18
    cv_enabled: bool = True
    cv_folds: int = 5
    cv_threshold: float = 0.5
    max_attempts: int | None = None
    gbt: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "RunConfig":
        unknown = set(raw) - _KNOWN
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        missing = {"algorithm", "objective", "budget", "workers", "seeds", "output_dir"} - set(raw)
        if missing:
            raise ConfigurationError(f"missing config keys: {sorted(missing)}")
        if raw["algorithm"] not in ALGORITHMS:
            raise ConfigurationError(f"algorithm must be one of {ALGORITHMS}")
        get_benchmark(raw["objective"])
        BudgetConfig(int(raw["budget"]), int(raw["workers"]))
        seeds = raw["seeds"]
        if isinstance(seeds, int):
            seeds = [seeds]
        if not seeds or not all(isinstance(s, int) and s >= 0 for s in seeds):
            raise ConfigurationError("seeds must be a non-empty list of non-negative integers")
        out = Path(raw["output_dir"])
        if base_dir is not None and not out.is_absolute():
            out = base_dir / out
        gbt = {k: raw[k] for k in _GBT_KEYS if k in raw}
        try:
            GbtConfig(**gbt)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad tree settings: {exc}") from None
        return cls(
            algorithm=raw["algorithm"],
            objective=raw["objective"],
            budget=int(raw["budget"]),
            workers=int(raw["workers"]),
            seeds=tuple(seeds),
            output_dir=out,
            cap=int(raw.get("cap", 18)),
            cv_enabled=bool(raw.get("cv_enabled", True)),
            cv_folds=int(raw.get("cv_folds", 5)),
            cv_threshold=float(raw.get("cv_threshold", 0.5)),
            max_attempts=raw.get("max_attempts"),
            gbt=gbt,
        )

    @classmethod
    def load(cls, path: Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigurationError("config must be a JSON object")
        return cls.from_dict(raw, base_dir=Path.cwd())

    def to_json(self) -> dict:
        d = {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "budget": self.budget,
            "workers": self.workers,
            "seeds": list(self.seeds),
        }
        if self.algorithm == "shac":
            d.update(cap=self.cap, cv_enabled=self.cv_enabled, cv_folds=self.cv_folds,
                     cv_threshold=self.cv_threshold, max_attempts=self.max_attempts, **self.gbt)
        return d


def make_optimizer(cfg: RunConfig, seed: int):
    space = get_benchmark(cfg.objective).space
    budget = BudgetConfig(cfg.budget, cfg.workers)
    if cfg.algorithm == "rs":
        return RandomSearch(space, budget, seed)
    if cfg.algorithm == "rs2x":
        return RandomSearch(space, doubled(budget), seed)
    return Shac(
        space,
        ShacConfig(
            budget,
            max_classifiers_cap=cfg.cap,
            cv_folds=cfg.cv_folds,
            cv_enabled=cfg.cv_enabled,
            cv_threshold=cfg.cv_threshold,
            gbt=GbtConfig(**cfg.gbt),
            max_attempts=cfg.max_attempts,
            seed=seed,
        ),
    )


def run_seed(cfg: RunConfig, seed: int) -> RunResult:
    objective = get_benchmark(cfg.objective)
    return run_optimizer(make_optimizer(cfg, seed), objective, cfg.workers)


def write_trial_log(path: Path, result: RunResult) -> None:
    events = {}
    for e in result.events:
        events.setdefault(e.batch, []).append(e)
    lines = []
    for i, r in enumerate(result.records):
        lines.append(json.dumps(r.to_json()))
        last_in_batch = i + 1 == len(result.records) or result.records[i + 1].batch != r.batch
        if last_in_batch:
            lines.extend(json.dumps(e.to_json()) for e in events.get(r.batch, ()))
    path.write_text("\n".join(lines) + "\n")


def read_trial_log(path: Path) -> list[TrialRecord]:
    records = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        if "event" in d:
            continue
        records.append(
            TrialRecord(d["trial"], d["batch"], tuple(d["point"]), d["value"], d["attempts"], d["cascade_size"])
        )
    return records


def execute(cfg: RunConfig) -> dict:
    """Run every seed, write per-seed artifacts and the cross-seed aggregate."""
    direction = get_benchmark(cfg.objective).direction
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    bests, top5s = [], []
    for seed in cfg.seeds:
        log.info("%s on %s, seed %d", cfg.algorithm, cfg.objective, seed)
        result = run_seed(cfg, seed)
        write_trial_log(out / f"trials_{seed}.jsonl", result)
        summary = analysis.summarize(result.records, direction)
        (out / f"summary_{seed}.json").write_text(
            json.dumps({"seed": seed, **summary.to_json(), "adoptions": len(result.events)}, indent=2)
        )
        bests.append(summary.best_value)
        top5s.append(summary.top5_mean)
    best_mean, best_se = analysis.mean_stderr(bests)
    top5_mean, top5_se = analysis.mean_stderr(top5s)
    aggregate = {
        "config": cfg.to_json(),
        "direction": direction.value,
        "best_values": bests,
        "best_mean": best_mean,
        "best_stderr": best_se,
        "top5_mean": top5_mean,
        "top5_stderr": top5_se,
    }
    (out / "aggregate.json").write_text(json.dumps(aggregate, indent=2))
    return aggregate


_LABELS = {"shac": "SHAC", "rs": "RS", "rs2x": "RS-2X"}


def compare(dirs: Sequence[Path]) -> str:
    """Side-by-side text table of several runs' aggregates."""
    if not dirs:
        raise ConfigurationError("compare needs at least one run directory")
    aggs = []
    for d in dirs:
        try:
            aggs.append(json.loads((Path(d) / "aggregate.json").read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"{d}: no readable aggregate.json ({exc})") from None
    keys = {(a["config"]["objective"], a["config"]["budget"], a["config"]["workers"]) for a in aggs}
    if len(keys) > 1:
        raise ConfigurationError(f"runs are not comparable: {sorted(keys)}")
    objective, budget, workers = keys.pop()
    rows = [f"{objective}  (batches={budget // workers}, workers={workers})",
            f"{'algorithm':<10} {'best (mean ± se)':>22} {'top-5 (mean ± se)':>22}"]
    for a in aggs:
        label = _LABELS.get(a["config"]["algorithm"], a["config"]["algorithm"])
        rows.append(
            f"{label:<10} {a['best_mean']:>12.4f} ± {a['best_stderr']:<7.4f}"
            f" {a['top5_mean']:>12.4f} ± {a['top5_stderr']:<7.4f}"
        )
    return "\n".join(rows)


def analyze(run_dir: Path, medians: bool, hamming: bool, shortlist: int | None = None) -> list[Path]:
    run_dir = Path(run_dir)
    agg = json.loads((run_dir / "aggregate.json").read_text())
    objective = get_benchmark(agg["config"]["objective"])
    written = []
    for path in sorted(run_dir.glob("trials_*.jsonl")):
        seed = path.stem.split("_", 1)[1]
        records = read_trial_log(path)
        if medians:
            target = run_dir / f"medians_{seed}.csv"
            analysis.write_medians_csv(target, analysis.per_batch_median(records))
            written.append(target)
        if hamming:
            size = len(records) if shortlist is None else shortlist
            points = analysis.select_shortlist(records, size, objective.direction)
            target = run_dir / f"hamming_{seed}.csv"
            analysis.write_histogram_csv(target, analysis.hamming_histogram(points, objective.space))
            written.append(target)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shac", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--seed-override", type=int, nargs="+", metavar="SEED")

    p_cmp = sub.add_parser("compare", help="tabulate aggregates of finished runs")
    p_cmp.add_argument("dirs", nargs="+", type=Path)

    p_an = sub.add_parser("analyze", help="write per-seed analysis CSVs")
    p_an.add_argument("dir", type=Path)
    which = p_an.add_mutually_exclusive_group(required=True)
    which.add_argument("--medians", action="store_true")
    which.add_argument("--hamming", action="store_true")
    p_an.add_argument("--shortlist", type=int, help="restrict --hamming to the N best trials")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        if args.command == "run":
            cfg = RunConfig.load(args.config)
            if args.seed_override:
                cfg = RunConfig(**{**cfg.__dict__, "seeds": tuple(args.seed_override)})
            agg = execute(cfg)
            print(f"{cfg.algorithm} {cfg.objective}: best {agg['best_mean']:.4f} ± {agg['best_stderr']:.4f}")
        elif args.command == "compare":
            print(compare(args.dirs))
        else:
            for path in analyze(args.dir, args.medians, args.hamming, args.shortlist):
                print(path)
    except (ConfigurationError, analysis.UnsupportedSpaceError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvaluationError as exc:
        print(f"error: run aborted: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
