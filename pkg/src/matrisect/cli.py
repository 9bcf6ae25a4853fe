"""Command line interface.

Subcommands:
  gen     write a generated instance as JSON
  solve   run one algorithm on an instance file and report the result
  bench   execute a benchmark grid, writing CSV, plot data, and figures
  verify  run the self-check battery against an instance's oracles

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bench import (
    ALGORITHMS,
    APPROX_ALGORITHMS,
    BenchConfig,
    execute_run,
    run_grid,
    write_csv,
    write_plot_data,
)
from .core import INF, CapabilityError
from .instances import FAMILIES, Instance, generate
from .verify import verify_instance

_ENV_PREFIX = "MATRISECT_"


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    params = json.loads(text)
    if not isinstance(params, dict):
        raise ValueError("--params must be a JSON object")
    return params


def _cmd_gen(args) -> int:
    instance = generate(args.family, args.n, args.seed, **_parse_params(args.params))
    payload = instance.to_json()
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        with open(args.out, "w") as fh:
            fh.write(payload)
    return 0


def _load_instance(path: str) -> Instance:
    if path == "-":
        return Instance.from_json(sys.stdin.read())
    with open(path) as fh:
        return Instance.from_json(fh.read())


def _cmd_solve(args) -> int:
    if args.algo in APPROX_ALGORITHMS:
        if args.eps is None:
            raise ValueError(f"--eps is required for {args.algo}")
        if not 0 < args.eps < 1:
            raise ValueError(f"--eps must lie in (0, 1), got {args.eps}")
    instance = _load_instance(args.instance)
    record = execute_run(
        instance,
        args.algo,
        eps=args.eps,
        with_exact=args.with_exact,
        p_override=args.p_override,
        cutoff_override=args.cutoff,
        solver_seed=args.seed,
    )
    report = {col: getattr(record, col) for col in record.__dataclass_fields__}
    if report["d_stop"] == INF:
        report["d_stop"] = "inf"
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(
        f"{record.algorithm} on {record.instance_id}: size={record.result_size} "
        f"indep_calls={record.independence_calls} rank_calls={record.rank_calls} "
        f"status={record.status}"
    )
    return 0 if record.status == "ok" else 1


def _env(name: str) -> str | None:
    return os.environ.get(_ENV_PREFIX + name)


def _split_csv(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _resolve_bench_config(args) -> BenchConfig:
    """Layer the grid settings: defaults, then config file, env, CLI flags."""
    cfg = BenchConfig()
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(json.load(fh))
    env_map = {
        "FAMILIES": ("families", _split_csv),
        "SIZES": ("sizes", lambda s: tuple(int(x) for x in _split_csv(s))),
        "ALGOS": ("algorithms", _split_csv),
        "EPS_GRID": ("eps_grid", lambda s: tuple(float(x) for x in _split_csv(s))),
        "SEEDS": ("seeds", int),
        "WORKERS": ("workers", int),
        "WITH_EXACT": ("with_exact", lambda s: s not in ("0", "false", "no")),
        "FIGURES": ("figures", lambda s: s not in ("0", "false", "no")),
    }
    for env_name, (key, conv) in env_map.items():
        raw = _env(env_name)
        if raw is not None:
            values[key] = conv(raw)
    if args.families:
        values["families"] = _split_csv(args.families)
    if args.sizes:
        values["sizes"] = tuple(int(x) for x in _split_csv(args.sizes))
    if args.algos:
        values["algorithms"] = _split_csv(args.algos)
    if args.eps:
        values["eps_grid"] = tuple(float(x) for x in _split_csv(args.eps))
    if args.seeds is not None:
        values["seeds"] = args.seeds
    if args.workers is not None:
        values["workers"] = args.workers
    if args.no_with_exact:
        values["with_exact"] = False
    if args.no_figures:
        values["figures"] = False
    for key, value in values.items():
        if not hasattr(cfg, key):
            raise ValueError(f"unknown bench setting {key!r}")
        if isinstance(value, list):
            value = tuple(value)
        setattr(cfg, key, value)
    return cfg


def _cmd_bench(args) -> int:
    cfg = _resolve_bench_config(args)
    cfg.validate()
    os.makedirs(args.out, exist_ok=True)

    def progress(done: int, total: int) -> None:
        if args.quiet:
            return
        print(f"\r{done}/{total} runs", end="", file=sys.stderr, flush=True)

    records = run_grid(cfg, progress=progress)
    if not args.quiet and records:
        print(file=sys.stderr)
    csv_path = os.path.join(args.out, "runs.csv")
    write_csv(records, csv_path)
    plot_path = os.path.join(args.out, "plotdata.tsv")
    write_plot_data(records, plot_path)
    written = [csv_path, plot_path]
    if cfg.figures:
        from .plotting import render_figures

        written.extend(render_figures(records, args.out))
    errors = sum(1 for rec in records if rec.status != "ok")
    print(f"{len(records)} runs ({errors} failed), wrote: " + ", ".join(written))
    return 0


def _cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    m1, m2 = instance.build()
    results = verify_instance(m1, m2, seed=args.seed, brute_cap=args.brute_cap)
    failed = 0
    for name, witness in results:
        if witness is None:
            print(f"PASS {name}")
        else:
            failed += 1
            print(f"FAIL {name}: {witness}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matrisect",
        description="Matroid intersection solvers with per-call oracle accounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance and write it as JSON")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--n", type=int, required=True, help="ground set size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--params", help="JSON object of extra generator arguments", default=None
    )
    gen.add_argument("--out", default="-", help="output path, - for stdout")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="run one algorithm on an instance file")
    solve.add_argument("instance", help="instance JSON path, - for stdin")
    solve.add_argument("--algo", required=True, choices=ALGORITHMS)
    solve.add_argument("--eps", type=float, default=None)
    solve.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for randomized solver steps (defaults to the instance seed)",
    )
    solve.add_argument("--p-override", type=int, default=None, dest="p_override")
    solve.add_argument("--cutoff", type=int, default=None)
    solve.add_argument("--with-exact", action="store_true", dest="with_exact")
    solve.add_argument("--out", default=None, help="write the full JSON report here")
    solve.set_defaults(func=_cmd_solve)

    bench = sub.add_parser("bench", help="run a benchmark grid")
    bench.add_argument("--out", required=True, help="output directory")
    bench.add_argument("--config", default=None, help="JSON file of grid settings")
    bench.add_argument("--families", default=None, help="comma separated")
    bench.add_argument("--sizes", default=None, help="comma separated")
    bench.add_argument("--algos", default=None, help="comma separated")
    bench.add_argument("--eps", default=None, help="comma separated eps grid")
    bench.add_argument("--seeds", type=int, default=None, help="seeds per grid cell")
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--no-with-exact", action="store_true")
    bench.add_argument("--no-figures", action="store_true")
    bench.add_argument("--quiet", action="store_true")
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify", help="self-check an instance's oracles")
    verify.add_argument("instance", help="instance JSON path, - for stdin")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--brute-cap", type=int, default=14, dest="brute_cap")
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ValueError,
        CapabilityError,
        FileNotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
