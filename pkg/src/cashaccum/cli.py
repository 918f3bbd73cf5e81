"""Command-line front end.

Subcommands: simulate, replicate, excess, converge, bench. Each reads a
scenario file (or ``--preset``) and writes one CSV. The seed is taken from
``--seed``, else the ``CASHACCUM_SEED`` environment variable, else the file.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .analysis import bench_sweep, convergence_study, fit_runtime, run_scenario, simulate
from .core import ASSET_REPLICATION, EXCESS_REPLICATION
from .errors import CashAccumError
from .kernel import aggregate_totals
from .presets import PRESETS
from .scenario_io import (
    parse_scenario,
    write_bench_csv,
    write_convergence_csv,
    write_excess_csv,
    write_paths_csv,
    write_series_csv,
)

SEED_ENV = "CASHACCUM_SEED"
SUBCOMMANDS = ("simulate", "replicate", "excess", "converge", "bench")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _load(scenario_path, preset, overrides):
    if preset is not None:
        if preset not in PRESETS:
            raise CashAccumError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        text = PRESETS[preset]
    else:
        text = Path(scenario_path).read_text(encoding="utf-8")
    return parse_scenario(text, overrides)


def resolve_seed(flag_seed, environ=os.environ):
    if flag_seed is not None:
        return str(flag_seed)
    env = environ.get(SEED_ENV)
    if env:
        return env.strip()
    return None


def _summary(result, elapsed):
    lines = []
    for i in range(result.m):
        lines.append(
            f"asset {i}: target={result.target[i]:.6f} cash={result.x[i, -1]:.6f} "
            f"terminal_gap={result.terminal_gap[i]:.6f}"
        )
    if result.m > 1:
        tot = aggregate_totals(result)
        lines.append(
            f"total: target={tot.target:.6f} cash={tot.cash[-1]:.6f} terminal_gap={tot.terminal_gap:.6f}"
        )
    lines.append(f"elapsed={elapsed:.3f}s")
    return "\n".join(lines)


def run(
    subcommand: str,
    scenario_path,
    output_path,
    overrides=None,
    *,
    preset=None,
    seed=None,
    N_values=(50, 500, 5000),
    seeds=20,
    sweep="N",
    values=(100, 1000, 10000),
    repeats=5,
    out=None,
    err=None,
    environ=os.environ,
) -> int:
    """Execute one subcommand; returns the process exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        overrides = dict(overrides or {})
        seed_text = resolve_seed(seed, environ)
        if seed_text is not None:
            overrides["seed"] = seed_text
        scenario = _load(scenario_path, preset, overrides)
        start = time.perf_counter()

        if subcommand == "simulate":
            paths = simulate(scenario)
            write_paths_csv(paths, output_path)
            finals = ", ".join(f"{v:.6f}" for v in paths.prices[:, -1])
            print(f"terminal prices: {finals}", file=out)
            print(f"elapsed={time.perf_counter() - start:.3f}s", file=out)
        elif subcommand == "replicate":
            if scenario.mode != ASSET_REPLICATION:
                raise CashAccumError("replicate needs mode=asset_replication; use 'excess' instead")
            result = run_scenario(scenario)
            write_series_csv(result, output_path)
            print(_summary(result, time.perf_counter() - start), file=out)
        elif subcommand == "excess":
            if scenario.mode != EXCESS_REPLICATION:
                raise CashAccumError("excess needs mode=excess_replication")
            result = run_scenario(scenario)
            write_excess_csv(result, output_path)
            print(_summary(result, time.perf_counter() - start), file=out)
        elif subcommand == "converge":
            records = convergence_study(scenario, N_values, seeds)
            write_convergence_csv(records, output_path)
            for r in records:
                print(
                    f"N={r.N} mean_abs_gap={r.mean_abs_gap:.6g} median_abs_gap={r.median_abs_gap:.6g} "
                    f"mean_rel_gap={r.mean_rel_gap:.6g}",
                    file=out,
                )
            print(f"elapsed={time.perf_counter() - start:.3f}s", file=out)
        elif subcommand == "bench":
            records = bench_sweep(scenario, sweep, values, repeats)
            fit = fit_runtime(records)
            write_bench_csv(records, fit, output_path)
            for r in records:
                print(f"{r.sweep_var}={r.value} mean_runtime={r.mean_runtime:.6f}s", file=out)
            print("fit: none" if fit is None else f"fit: R^2={fit.r2:.4f} slope={fit.slope:.3e}", file=out)
        else:
            raise CashAccumError(f"unknown subcommand {subcommand!r}")
    except (CashAccumError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cashaccum", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("scenario", nargs="?", help="scenario file (omit with --preset)")
    parser.add_argument("output", help="CSV file to write")
    parser.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument("--seed", type=int, help=f"overrides {SEED_ENV} and the file's seed")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario key (repeatable)")
    parser.add_argument("--N-values", type=_int_list, default=[50, 500, 5000],
                        help="converge: comma list of step counts")
    parser.add_argument("--seeds", type=int, default=20, help="converge: ensemble size")
    parser.add_argument("--sweep", choices=("N", "m"), default="N", help="bench: swept variable")
    parser.add_argument("--values", type=_int_list, default=[100, 1000, 10000],
                        help="bench: comma list of sweep values")
    parser.add_argument("--repeats", type=int, default=5, help="bench: timed runs per value")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if (args.scenario is None) == (args.preset is None):
        parser.error("give exactly one of a scenario file or --preset")
    overrides = {}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            parser.error(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    return run(
        args.subcommand,
        args.scenario,
        args.output,
        overrides,
        preset=args.preset,
        seed=args.seed,
        N_values=args.N_values,
        seeds=args.seeds,
        sweep=args.sweep,
        values=args.values,
        repeats=args.repeats,
    )


if __name__ == "__main__":
    sys.exit(main())
