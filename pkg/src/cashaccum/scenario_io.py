"""Flat ``key=value`` scenario files and the CSV writers.

A scenario file holds one ``key=value`` pair per line; ``#`` starts a
comment. Vector keys (S0, drift, sigma, quantity, start_cash) take comma
lists. A single value for S0, drift, sigma or quantity is repeated for every
asset, while a single start_cash value is a total shared equally among them.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping

from .core import (
    EXCESS_REPLICATION,
    MODES,
    AccountParams,
    MarketParams,
    OptionSpec,
    Scenario,
    TimeGrid,
    split_start_cash,
    validate_scenario,
)
from .errors import MissingKey, ParseError, UnknownKey
from .kernel import ReplicationResult, aggregate_totals
from .option import ExcessResult
from .paths import PathSet

COMMON_KEYS = (
    "mode", "T", "N", "m", "S0", "drift", "sigma", "r", "start_cash", "gamma", "seed", "quantity",
)
EXCESS_KEYS = ("K", "c", "floor_at_zero")
REQUIRED = ("mode", "T", "N", "S0", "sigma", "r", "start_cash")
REQUIRED_EXCESS = ("K", "c")

SERIES_HEADER = ("time", "asset_id", "price", "cash", "u")
EXCESS_HEADER = ("time", "excess", "cash")
CONVERGENCE_HEADER = ("N", "seeds", "mean_abs_gap", "median_abs_gap", "mean_rel_gap")
BENCH_HEADER = ("sweep_var", "value", "mean_runtime", "repeats", "fit_r2")

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


def read_pairs(text: str) -> dict[str, tuple[str, int | None]]:
    """Split a scenario document into ``{key: (raw value, line number)}``."""
    pairs: dict[str, tuple[str, int | None]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ParseError(f"expected key=value, got {raw.strip()!r}", lineno)
        if key not in COMMON_KEYS and key not in EXCESS_KEYS:
            raise UnknownKey(f"unknown key {key!r}", lineno)
        if key in pairs:
            raise ParseError(f"duplicate key {key!r}", lineno)
        pairs[key] = (value, lineno)
    return pairs


def _number(pairs, key, kind=float):
    value, lineno = pairs[key]
    try:
        return kind(value)
    except ValueError:
        raise ParseError(f"{key}: cannot read {value!r} as {kind.__name__}", lineno) from None


def _vector(pairs, key, m, kind=float):
    value, lineno = pairs[key]
    try:
        items = [kind(v.strip()) for v in value.split(",")]
    except ValueError:
        raise ParseError(f"{key}: cannot read {value!r} as a list of {kind.__name__}", lineno) from None
    if len(items) == 1 and m > 1:
        items = items * m
    if len(items) != m:
        raise ParseError(f"{key}: expected {m} entries, got {len(items)}", lineno)
    return tuple(items)


def _flag(pairs, key):
    value, lineno = pairs[key]
    low = value.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ParseError(f"{key}: expected true/false, got {value!r}", lineno)


def scenario_from_pairs(pairs: Mapping[str, tuple[str, int | None]]) -> Scenario:
    for key in REQUIRED:
        if key not in pairs:
            raise MissingKey(f"missing required key {key!r}")
    mode, lineno = pairs["mode"]
    if mode not in MODES:
        raise ParseError(f"mode must be one of {', '.join(MODES)}, got {mode!r}", lineno)
    excess = mode == EXCESS_REPLICATION
    if excess:
        for key in REQUIRED_EXCESS:
            if key not in pairs:
                raise MissingKey(f"missing required key {key!r} for mode {mode}")
    else:
        for key in EXCESS_KEYS:
            if key in pairs:
                raise UnknownKey(f"key {key!r} is not valid for mode {mode}", pairs[key][1])

    if "m" in pairs:
        m = _number(pairs, "m", int)
        if m < 1:
            raise ParseError(f"m must be >= 1, got {m}", pairs["m"][1])
    else:
        m = len(pairs["S0"][0].split(","))

    grid = TimeGrid(_number(pairs, "T"), _number(pairs, "N", int))
    market = MarketParams(
        _vector(pairs, "S0", m),
        _vector(pairs, "drift", m) if "drift" in pairs else (0.0,) * m,
        _vector(pairs, "sigma", m),
    )
    if "," in pairs["start_cash"][0]:
        start_cash = _vector(pairs, "start_cash", m)
    else:
        start_cash = split_start_cash(_number(pairs, "start_cash"), m)
    account = AccountParams(
        _number(pairs, "r"),
        start_cash,
        _number(pairs, "gamma") if "gamma" in pairs else 1.0,
    )
    option = None
    if excess:
        option = OptionSpec(
            _number(pairs, "K"),
            _number(pairs, "c"),
            _flag(pairs, "floor_at_zero") if "floor_at_zero" in pairs else True,
        )
    seed = _number(pairs, "seed", int) if "seed" in pairs else 0
    quantity = _vector(pairs, "quantity", m, int) if "quantity" in pairs else None
    scenario = Scenario(mode, grid, market, account, option, seed, quantity)
    return validate_scenario(scenario)


def parse_scenario(text: str, overrides: Mapping[str, str] | None = None) -> Scenario:
    """Parse and validate a scenario document.

    ``overrides`` replaces (or adds) raw values before interpretation.
    """
    pairs = read_pairs(text)
    for key, value in (overrides or {}).items():
        if key not in COMMON_KEYS and key not in EXCESS_KEYS:
            raise UnknownKey(f"unknown key {key!r} in override")
        pairs[key] = (str(value), None)
    return scenario_from_pairs(pairs)


def _join(values: Iterable) -> str:
    return ",".join(repr(v) for v in values)


def render_scenario(s: Scenario) -> str:
    """Serialise a scenario so that ``parse_scenario(render_scenario(s)) == s``."""
    lines = [
        f"mode={s.mode}",
        f"T={s.grid.T!r}",
        f"N={s.grid.N}",
        f"m={s.m}",
        f"S0={_join(s.market.S0)}",
        f"drift={_join(s.market.drift)}",
        f"sigma={_join(s.market.sigma)}",
        f"r={s.account.r!r}",
        f"start_cash={_join(s.account.start_cash)}",
        f"gamma={s.account.gamma!r}",
        f"seed={s.seed}",
        f"quantity={','.join(str(q) for q in s.quantity)}",
    ]
    if s.option is not None:
        lines += [
            f"K={s.option.K!r}",
            f"c={s.option.c!r}",
            f"floor_at_zero={'true' if s.option.floor_at_zero else 'false'}",
        ]
    return "\n".join(lines) + "\n"


def fmt(value) -> str:
    return format(float(value), ".12g")


def _write_rows(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def series_rows(result: ReplicationResult):
    times = result.grid.times()
    N = result.grid.N
    prices = result.paths.prices

    def block(asset_id, price, cash, u):
        for k in range(N + 1):
            yield (fmt(times[k]), asset_id, fmt(price[k]), fmt(cash[k]), fmt(u[k]) if k < N else "")

    for i in range(result.m):
        yield from block(str(i), prices[i], result.x[i], result.u[i])
    if result.m > 1:
        totals = aggregate_totals(result)
        yield from block("total", prices.sum(axis=0), totals.cash, result.u.sum(axis=0))


def write_series_csv(result: ReplicationResult, path) -> None:
    """``time,asset_id,price,cash,u`` rows ordered by asset then time."""
    _write_rows(path, SERIES_HEADER, series_rows(result))


def write_paths_csv(paths: PathSet, path) -> None:
    """Price paths in the series layout with empty cash and u columns."""
    times = paths.grid.times()
    rows = (
        (fmt(times[k]), str(i), fmt(paths.prices[i, k]), "", "")
        for i in range(paths.m)
        for k in range(paths.grid.N + 1)
    )
    _write_rows(path, SERIES_HEADER, rows)


def write_excess_csv(result: ExcessResult, path) -> None:
    """``time,excess,cash`` where excess is c*f(t_k) and the last row holds the target."""
    times = result.grid.times()
    N = result.grid.N
    c = result.c
    rows = []
    for k in range(N + 1):
        excess = result.target[0] if k == N else c * result.f[k]
        rows.append((fmt(times[k]), fmt(excess), fmt(result.x[0, k])))
    _write_rows(path, EXCESS_HEADER, rows)


def write_convergence_csv(records, path) -> None:
    rows = (
        (str(r.N), str(r.seeds), fmt(r.mean_abs_gap), fmt(r.median_abs_gap), fmt(r.mean_rel_gap))
        for r in records
    )
    _write_rows(path, CONVERGENCE_HEADER, rows)


def write_bench_csv(records, fit, path) -> None:
    r2 = fmt(fit.r2) if fit is not None else ""
    rows = (
        (r.sweep_var, str(r.value), fmt(r.mean_runtime), str(r.repeats), r2) for r in records
    )
    _write_rows(path, BENCH_HEADER, rows)

