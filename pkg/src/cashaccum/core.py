"""Domain types for cash-accumulation scenarios and their validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import InvalidAccount, InvalidGamma, InvalidGrid, InvalidMarket, InvalidOption

ASSET_REPLICATION = "asset_replication"
EXCESS_REPLICATION = "excess_replication"
MODES = (ASSET_REPLICATION, EXCESS_REPLICATION)

MAX_SEED = 2**64 - 1


def _floats(values) -> tuple[float, ...]:
    if np.ndim(values) == 0:
        return (float(values),)
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k*dt, k = 0..N, over [0, T]."""

    T: float
    N: int

    @property
    def dt(self) -> float:
        return self.T / self.N

    def times(self) -> np.ndarray:
        t = np.arange(self.N + 1) * self.dt
        t[-1] = self.T
        return t

    def with_steps(self, N: int) -> TimeGrid:
        return TimeGrid(self.T, N)


@dataclass(frozen=True)
class MarketParams:
    """Independent GBM assets with constant drift and volatility per asset."""

    S0: tuple[float, ...]
    drift: tuple[float, ...]
    sigma: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "S0", _floats(self.S0))
        object.__setattr__(self, "drift", _floats(self.drift))
        object.__setattr__(self, "sigma", _floats(self.sigma))

    @property
    def m(self) -> int:
        return len(self.S0)

    @classmethod
    def uniform(cls, m: int, S0: float, drift: float = 0.0, sigma: float = 0.0) -> MarketParams:
        return cls((S0,) * m, (drift,) * m, (sigma,) * m)


@dataclass(frozen=True)
class AccountParams:
    """Interest rate, per-asset starting cash (negative means debt) and penalty weight."""

    r: float
    start_cash: tuple[float, ...]
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "start_cash", _floats(self.start_cash))


@dataclass(frozen=True)
class OptionSpec:
    K: float
    c: float
    floor_at_zero: bool = True


@dataclass(frozen=True)
class Scenario:
    mode: str
    grid: TimeGrid
    market: MarketParams
    account: AccountParams
    option: OptionSpec | None = None
    seed: int = 0
    quantity: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        if self.quantity is None:
            object.__setattr__(self, "quantity", (1,) * self.market.m)
        else:
            q = self.quantity
            object.__setattr__(self, "quantity", tuple(q) if np.ndim(q) else (q,))

    @property
    def m(self) -> int:
        return self.market.m

    def with_steps(self, N: int) -> Scenario:
        return replace(self, grid=self.grid.with_steps(N))

    def with_seed(self, seed: int) -> Scenario:
        return replace(self, seed=seed)


def split_start_cash(total: float, m: int) -> tuple[float, ...]:
    """Share a total starting amount equally among m independent processes."""
    return (total / m,) * m


def _finite(values: Sequence[float]) -> bool:
    return all(math.isfinite(v) for v in values)


def validate_scenario(s: Scenario) -> Scenario:
    """Check every domain invariant and return ``s`` unchanged.

    Raises the matching :mod:`cashaccum.errors` subclass for the first
    violated invariant.
    """
    g = s.grid
    if isinstance(g.N, bool) or int(g.N) != g.N or g.N < 2:
        raise InvalidGrid(f"N must be an integer >= 2, got {g.N!r}")
    if not (math.isfinite(g.T) and g.T > 0):
        raise InvalidGrid(f"T must be positive, got {g.T!r}")

    mk = s.market
    m = mk.m
    if m < 1:
        raise InvalidMarket("at least one asset is required")
    if len(mk.drift) != m or len(mk.sigma) != m:
        raise InvalidMarket(f"S0, drift and sigma must all have {m} entries")
    if not (_finite(mk.S0) and _finite(mk.drift) and _finite(mk.sigma)):
        raise InvalidMarket("market parameters must be finite")
    if any(v <= 0 for v in mk.S0):
        raise InvalidMarket(f"S0 entries must be positive, got {mk.S0}")
    if any(v < 0 for v in mk.sigma):
        raise InvalidMarket(f"sigma entries must be >= 0, got {mk.sigma}")
    if len(s.quantity) != m or any(
        isinstance(q, bool) or int(q) != q or q < 1 for q in s.quantity
    ):
        raise InvalidMarket(f"quantity must hold {m} integers >= 1, got {s.quantity}")

    acc = s.account
    if not (math.isfinite(acc.gamma) and acc.gamma > 0):
        raise InvalidGamma(f"gamma must be positive, got {acc.gamma!r}")
    if not (math.isfinite(acc.r) and acc.r >= 0):
        raise InvalidAccount(f"r must be >= 0, got {acc.r!r}")
    if len(acc.start_cash) != m or not _finite(acc.start_cash):
        raise InvalidAccount(f"start_cash must hold {m} finite entries, got {acc.start_cash}")

    if s.mode not in MODES:
        raise InvalidOption(f"unknown mode {s.mode!r}")
    if not (isinstance(s.seed, (int, np.integer)) and 0 <= s.seed <= MAX_SEED):
        raise InvalidMarket(f"seed must be a 64-bit unsigned integer, got {s.seed!r}")

    if s.mode == EXCESS_REPLICATION:
        opt = s.option
        if opt is None:
            raise InvalidOption("excess_replication requires an option spec")
        if m != 1:
            raise InvalidOption(f"excess_replication supports a single asset, got m={m}")
        if mk.sigma[0] == 0:
            raise InvalidOption("excess_replication requires sigma > 0")
        if not (math.isfinite(opt.K) and opt.K > 0):
            raise InvalidOption(f"strike must be positive, got {opt.K!r}")
        if not (0 <= opt.c <= 1):
            raise InvalidOption(f"proportion c must lie in [0, 1], got {opt.c!r}")
    elif s.option is not None:
        raise InvalidOption("option spec is only allowed in excess_replication mode")
    return s
