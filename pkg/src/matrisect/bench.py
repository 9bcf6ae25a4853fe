"""Benchmark grid runner: per-run records, CSV and plot-data emission.

A run is one (instance, algorithm, eps) triple executed on fresh oracles; its
record carries the result size and the exact per-oracle query counts.  Grid
execution is deterministic: replaying the same grid yields byte-identical
CSV output except for the wall-clock column.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .augsets import solve_approx_augset
from .core import INF, Matroid, SolveResult, greedy_maximal_common
from .fractional import solve_approx_sparse
from .indep_solver import solve_exact_indep
from .instances import FAMILIES, Instance, generate
from .rank_solver import solve_approx_rank, solve_exact_rank
from .reference import solve_reference

ALGORITHMS = (
    "greedy",
    "exact-rank",
    "exact-indep",
    "approx-rank",
    "approx-augset",
    "approx-sparse",
    "reference",
)

APPROX_ALGORITHMS = ("approx-rank", "approx-augset", "approx-sparse")

EXACT_ALGORITHMS = ("exact-rank", "exact-indep", "reference")

CSV_COLUMNS = (
    "instance_id",
    "family",
    "n",
    "seed",
    "algorithm",
    "eps",
    "result_size",
    "r_exact",
    "independence_calls",
    "rank_calls",
    "phases",
    "d_stop",
    "status",
    "wall_ms",
)


def run_algorithm(
    m1: Matroid,
    m2: Matroid,
    algorithm: str,
    *,
    eps: float | None = None,
    seed: int = 0,
    p_override: int | None = None,
    cutoff_override: int | None = None,
) -> SolveResult:
    """Dispatch one solver run on the given oracles."""
    if algorithm in APPROX_ALGORITHMS and eps is None:
        raise ValueError(f"algorithm {algorithm} needs --eps")
    if algorithm == "greedy":
        mask = greedy_maximal_common(m1, m2)
        return SolveResult(mask=mask, size=mask.bit_count())
    if algorithm == "exact-rank":
        return solve_exact_rank(m1, m2)
    if algorithm == "exact-indep":
        return solve_exact_indep(m1, m2)
    if algorithm == "approx-rank":
        return solve_approx_rank(m1, m2, eps)
    if algorithm == "approx-augset":
        return solve_approx_augset(
            m1, m2, eps, p_override=p_override, cutoff_override=cutoff_override
        )
    if algorithm == "approx-sparse":
        return solve_approx_sparse(
            m1, m2, eps, seed, p_override=p_override, cutoff_override=cutoff_override
        )
    if algorithm == "reference":
        return solve_reference(m1, m2)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")


@dataclass
class RunRecord:
    """One row of the benchmark output."""

    instance_id: str
    family: str
    n: int
    seed: int
    algorithm: str
    eps: float | None
    result_size: int
    r_exact: int | None
    independence_calls: int
    rank_calls: int
    phases: int
    d_stop: float | None
    status: str
    wall_ms: float

    def to_row(self) -> list[str]:
        def fmt(v) -> str:
            if v is None:
                return ""
            if isinstance(v, float):
                if v == INF:
                    return "inf"
                return f"{v:.6g}"
            return str(v)

        return [fmt(getattr(self, col)) for col in CSV_COLUMNS]


def execute_run(
    instance: Instance,
    algorithm: str,
    *,
    eps: float | None = None,
    with_exact: bool = False,
    p_override: int | None = None,
    cutoff_override: int | None = None,
    solver_seed: int | None = None,
) -> RunRecord:
    """Build fresh oracles, run one algorithm, and collect the record.

    Failures are captured in the status column instead of aborting, so a
    long grid keeps going.  `with_exact` computes the true optimum on a
    second fresh oracle pair (its queries are not counted).  `solver_seed`
    feeds randomized solvers and defaults to the instance seed.
    """
    m1, m2 = instance.build()
    status = "ok"
    start = time.perf_counter()
    try:
        result = run_algorithm(
            m1,
            m2,
            algorithm,
            eps=eps,
            seed=instance.seed if solver_seed is None else solver_seed,
            p_override=p_override,
            cutoff_override=cutoff_override,
        )
    except Exception as exc:  # noqa: BLE001 - grid rows must not abort the run
        result = SolveResult(mask=0, size=0)
        status = f"error:{type(exc).__name__}"
    wall_ms = (time.perf_counter() - start) * 1000.0
    r_exact: int | None = None
    if status == "ok":
        if algorithm in EXACT_ALGORITHMS:
            r_exact = result.size
        elif with_exact:
            f1, f2 = instance.build()
            r_exact = solve_exact_indep(f1, f2).size
    return RunRecord(
        instance_id=instance.instance_id,
        family=instance.family,
        n=instance.n,
        seed=instance.seed,
        algorithm=algorithm,
        eps=eps,
        result_size=result.size,
        r_exact=r_exact,
        independence_calls=m1.stats.independence_calls + m2.stats.independence_calls,
        rank_calls=m1.stats.rank_calls + m2.stats.rank_calls,
        phases=result.phases,
        d_stop=result.d_stop if algorithm in APPROX_ALGORITHMS else None,
        status=status,
        wall_ms=wall_ms,
    )


@dataclass
class BenchConfig:
    """Grid definition plus execution knobs."""

    families: tuple = ("bipartite-matching", "uniform-partition")
    sizes: tuple = (40, 80, 160)
    algorithms: tuple = ("greedy", "exact-indep", "approx-augset")
    eps_grid: tuple = (0.5, 0.2, 0.1, 0.05)
    seeds: int = 3
    workers: int = 0  # 0 means in-process serial execution
    with_exact: bool = True
    figures: bool = True

    def validate(self) -> None:
        for f in self.families:
            if f not in FAMILIES:
                raise ValueError(f"unknown family {f!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        for e in self.eps_grid:
            if not 0 < e < 1:
                raise ValueError(f"eps values must lie in (0, 1), got {e}")
        if self.seeds < 1:
            raise ValueError("need at least one seed per cell")


def grid_tasks(config: BenchConfig) -> list[dict]:
    """Expand the grid into an ordered, picklable task list."""
    tasks = []
    for family in config.families:
        for n in config.sizes:
            for seed in range(config.seeds):
                instance = generate(family, n, seed)
                for algorithm in config.algorithms:
                    eps_values = (
                        config.eps_grid if algorithm in APPROX_ALGORITHMS else (None,)
                    )
                    for eps in eps_values:
                        tasks.append(
                            {
                                "instance_json": instance.to_json(),
                                "algorithm": algorithm,
                                "eps": eps,
                                "with_exact": config.with_exact,
                            }
                        )
    return tasks


def _run_task(task: dict) -> RunRecord:
    instance = Instance.from_json(task["instance_json"])
    return execute_run(
        instance,
        task["algorithm"],
        eps=task["eps"],
        with_exact=task["with_exact"],
    )


def run_grid(config: BenchConfig, progress=None) -> list[RunRecord]:
    """Execute every task in the grid, optionally on a process pool.

    Results keep task order regardless of worker count, so output files are
    reproducible.  `progress` is an optional callback taking (done, total).
    """
    config.validate()
    tasks = grid_tasks(config)
    records: list[RunRecord] = []
    if config.workers and config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for rec in pool.map(_run_task, tasks):
                records.append(rec)
                if progress:
                    progress(len(records), len(tasks))
    else:
        for task in tasks:
            records.append(_run_task(task))
            if progress:
                progress(len(records), len(tasks))
    return records


def series_name(rec: RunRecord) -> str:
    if rec.eps is None:
        return rec.algorithm
    return f"{rec.algorithm}(eps={rec.eps:g})"


def write_csv(records: list[RunRecord], path: str) -> None:
    """Fixed-column CSV; header always present, even for an empty grid."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_row())


def write_plot_data(records: list[RunRecord], path: str) -> None:
    """Long-format plot data: one (series, x, y) row per run.

    x is the ground set size and y the total oracle calls, so downstream
    plotting needs no pivoting.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(("series", "x", "y"))
        for rec in records:
            if rec.status != "ok":
                continue
            writer.writerow(
                (series_name(rec), rec.n, rec.independence_calls + rec.rank_calls)
            )
