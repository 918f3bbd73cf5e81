"""Optimal cash accumulation for random terminal claims."""

from .analysis import bench_sweep, convergence_study, fit_runtime, run_scenario, simulate
from .core import (
    ASSET_REPLICATION,
    EXCESS_REPLICATION,
    AccountParams,
    MarketParams,
    OptionSpec,
    Scenario,
    TimeGrid,
    split_start_cash,
    validate_scenario,
)
from .kernel import (
    ReplicationResult,
    aggregate_totals,
    capital_R,
    capital_R_quadrature,
    direct_sum_oracle,
    replicate,
)
from .option import ExcessResult, bs_quote, norm_cdf, replicate_excess
from .paths import NormalStream, PathSet, simulate_paths, wiener_increments
from .scenario_io import parse_scenario, render_scenario, write_series_csv

__version__ = "0.1.0"
