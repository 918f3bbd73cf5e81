"""Ensemble convergence studies and runtime-scaling sweeps."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import (
    EXCESS_REPLICATION,
    MAX_SEED,
    AccountParams,
    MarketParams,
    Scenario,
    validate_scenario,
)
from .kernel import ReplicationResult, replicate
from .option import replicate_excess
from .paths import NormalStream, PathSet, simulate_paths


def simulate(scenario: Scenario) -> PathSet:
    return simulate_paths(scenario.market, scenario.grid, NormalStream(scenario.seed), scenario.quantity)


def run_scenario(scenario: Scenario) -> ReplicationResult:
    """Validate, simulate and replicate in the scenario's mode."""
    validate_scenario(scenario)
    paths = simulate(scenario)
    if scenario.mode == EXCESS_REPLICATION:
        return replicate_excess(paths, scenario)
    return replicate(paths, scenario)


@dataclass(frozen=True)
class ConvergenceRecord:
    N: int
    seeds: int
    mean_abs_gap: float
    median_abs_gap: float
    mean_rel_gap: float


def seed_list(base_seed: int, count: int) -> list[int]:
    return [(base_seed + i) % (MAX_SEED + 1) for i in range(count)]


def _relative(gap: float, target: float) -> float:
    if target != 0:
        return abs(gap) / abs(target)
    return 0.0 if gap == 0 else float("inf")


def convergence_study(base: Scenario, N_values: Sequence[int], seeds: int) -> list[ConvergenceRecord]:
    """Terminal-gap statistics over ``seeds`` seeded runs for each grid size.

    Seeds are ``base.seed, base.seed + 1, ...``; the gap of a run is the
    account-level gap summed over assets.
    """
    N_values = list(N_values)
    if seeds < 1:
        raise ValueError("seeds must be >= 1")
    if any(n < 2 for n in N_values) or any(b <= a for a, b in zip(N_values, N_values[1:])):
        raise ValueError(f"N_values must be strictly increasing and >= 2, got {N_values}")

    records = []
    for N in N_values:
        abs_gaps, rel_gaps = [], []
        for seed in seed_list(base.seed, seeds):
            res = run_scenario(replace(base.with_steps(N), seed=seed))
            gap = float(np.sum(res.terminal_gap))
            abs_gaps.append(abs(gap))
            rel_gaps.append(_relative(gap, float(np.sum(res.target))))
        records.append(
            ConvergenceRecord(
                N=N,
                seeds=seeds,
                mean_abs_gap=statistics.fmean(abs_gaps),
                median_abs_gap=statistics.median(abs_gaps),
                mean_rel_gap=statistics.fmean(rel_gaps),
            )
        )
    return records


@dataclass(frozen=True)
class BenchRecord:
    sweep_var: str
    value: int
    mean_runtime: float
    repeats: int


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r2: float


def with_assets(base: Scenario, m: int) -> Scenario:
    """Copy asset 0 of ``base`` m times, each with asset 0's starting cash."""
    mk, acc = base.market, base.account
    market = MarketParams.uniform(m, mk.S0[0], mk.drift[0], mk.sigma[0])
    account = AccountParams(acc.r, (acc.start_cash[0],) * m, acc.gamma)
    return replace(base, market=market, account=account, quantity=None)


def _sweep_scenario(base: Scenario, sweep_var: str, value: int) -> Scenario:
    if sweep_var == "N":
        return base.with_steps(value)
    if sweep_var == "m":
        return with_assets(base, value)
    raise ValueError(f"sweep_var must be 'N' or 'm', got {sweep_var!r}")


def bench_sweep(
    base: Scenario,
    sweep_var: str,
    values: Sequence[int],
    repeats: int = 5,
) -> list[BenchRecord]:
    """Mean wall-clock time of a full simulate+replicate run per sweep value.

    One untimed warm-up run precedes the timed repeats of every value.
    """
    values = list(values)
    if repeats < 3:
        raise ValueError("repeats must be >= 3")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"values must be strictly increasing, got {values}")

    records = []
    for value in values:
        scenario = validate_scenario(_sweep_scenario(base, sweep_var, value))
        run_scenario(scenario)
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            run_scenario(scenario)
            times.append(time.perf_counter() - start)
        records.append(BenchRecord(sweep_var, value, statistics.fmean(times), repeats))
    return records


def fit_runtime(records: Sequence[BenchRecord]) -> LinearFit | None:
    """Least-squares line through (value, mean_runtime); None for fewer than two points."""
    if len(records) < 2:
        return None
    x = np.array([r.value for r in records], dtype=float)
    y = np.array([r.mean_runtime for r in records])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return LinearFit(float(slope), float(intercept), r2)
