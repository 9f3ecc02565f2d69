"""Command-line interface: ``varloc solve`` and ``varloc bench``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import baselines, bench, solver
from .core import load_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varloc",
        description="Percentile-robust 2D target localization from ranges.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="estimate a target from a scenario JSON")
    p_solve.add_argument("scenario", help="path to a scenario JSON file")
    p_solve.add_argument(
        "--method",
        choices=("rpte", "srls", "gd"),
        default="rpte",
        help="estimator to run (default: rpte)",
    )
    p_solve.add_argument(
        "--grid",
        type=int,
        default=solver.DEFAULT_GRID,
        metavar="G",
        help="grid points per curve for rpte (default: %(default)s)",
    )
    p_solve.add_argument(
        "--oracle",
        type=float,
        default=None,
        metavar="H",
        help="also run the dense-lattice oracle at pitch H km as a cross-check",
    )

    p_bench = sub.add_parser("bench", help="run the Monte Carlo sweep")
    p_bench.add_argument("--config", required=True, help="BenchConfig JSON path")
    p_bench.add_argument("--out", required=True, help="output directory for CSVs")
    return parser


def _run_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.method == "rpte":
        estimate = solver.rpte(scenario, args.grid)
    elif args.method == "srls":
        estimate = baselines.srls(scenario)
    else:
        estimate = baselines.gd_rls(scenario)
    payload = estimate.to_dict()
    if args.oracle is not None:
        payload["oracle"] = solver.oracle_grid(scenario, args.oracle).to_dict()
    print(json.dumps(payload))
    return 0


def _run_bench(args) -> int:
    try:
        cfg = bench.BenchConfig.from_json_file(args.config)
        env_seed = os.environ.get("VARLOC_SEED")
        if env_seed is not None:
            try:
                cfg = dataclasses.replace(cfg, seed=int(env_seed))
            except ValueError as exc:
                raise bench.ConfigError(
                    f"VARLOC_SEED must be an integer, got {env_seed!r}"
                ) from exc
    except bench.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    records = bench.run_monte_carlo(cfg)
    trials_path, summary_path = bench.emit_report(records, args.out)
    print(f"wrote {trials_path} and {summary_path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "solve":
        return _run_solve(args)
    return _run_bench(args)


if __name__ == "__main__":
    raise SystemExit(main())
