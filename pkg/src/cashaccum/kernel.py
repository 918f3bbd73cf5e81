"""Optimal cash-flow replication of a terminal claim on a discrete grid.

For each asset the engine keeps the martingale sum

    M(t_k) = M(t_{k-1}) + R(t_k)^{-1} dS(t_k),   k = 1..N-1,

the level ``mu(t_k) = R(0)^{-1} (S(0) - e^{rT} a) + M(t_k)`` and the cash
density ``u(t_k) = Gamma^{-1} e^{r(T - t_k)} mu(t_k)``.  The deposit made
during step k (from t_{k-1} to t_k) is ``u(t_{k-1}) dt``, using only what is
known at the start of the step, and the account then accrues for one step:

    x(t_k) = (x(t_{k-1}) + u(t_{k-1}) dt) e^{r dt},   x(t_0) = a.

R is therefore only ever inverted at t_1..t_{N-1}; R(T) = 0 is never touched.
The increment dS(t_N) arrives after the last deposit and cannot be hedged;
it is what the terminal gap measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .core import EXCESS_REPLICATION, AccountParams, Scenario, TimeGrid
from .errors import GridMismatch, SingularR
from .paths import PathSet
from .quadrature import adaptive_simpson


def capital_R(s: float, account: AccountParams, grid: TimeGrid) -> float:
    """Closed form of R(s) = int_s^T e^{2r(T-t)} / Gamma dt."""
    if s >= grid.T:
        raise SingularR(f"R(s) vanishes for s >= T (s={s}, T={grid.T})")
    return float(_R_closed(grid.T - s, account.r, account.gamma))


def _R_closed(tau, r: float, gamma: float):
    tau = np.asarray(tau, dtype=float)
    if r == 0:
        return tau / gamma
    # (tau/gamma) * expm1(x)/x keeps full precision for tiny or subnormal r
    x = 2.0 * r * tau
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    ratio = np.where(small, 1.0 + 0.5 * x, np.expm1(safe) / safe)
    return tau / gamma * ratio


def capital_R_quadrature(
    s: float,
    Q: Callable[[float], float],
    grid: TimeGrid,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-8,
) -> float:
    """R(s) by adaptive Simpson quadrature of an arbitrary positive Q."""
    if s >= grid.T:
        raise SingularR(f"R(s) vanishes for s >= T (s={s}, T={grid.T})")
    return adaptive_simpson(Q, s, grid.T, abs_tol=abs_tol, rel_tol=rel_tol)


def Q_density(account: AccountParams, grid: TimeGrid) -> Callable[[float], float]:
    """Q(t) = e^{2r(T-t)} / Gamma as a callable, for the quadrature path."""
    r, gamma, T = account.r, account.gamma, grid.T
    return lambda t: math.exp(2.0 * r * (T - t)) / gamma


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    """Per-asset series on the grid.

    ``u``, ``M`` and ``mu`` are sampled at t_0..t_{N-1} (shape m x N) and
    ``x`` at t_0..t_N (shape m x (N+1)).
    """

    u: np.ndarray
    x: np.ndarray
    M: np.ndarray
    mu: np.ndarray
    target: np.ndarray
    terminal_gap: np.ndarray
    grid: TimeGrid
    paths: PathSet

    @property
    def m(self) -> int:
        return self.x.shape[0]


class Totals(NamedTuple):
    cash: np.ndarray
    target: float
    terminal_gap: float


def _check_grid(paths: PathSet, scenario: Scenario) -> None:
    if paths.grid != scenario.grid or paths.increments.shape[1] != scenario.grid.N:
        raise GridMismatch(f"paths built on {paths.grid}, scenario uses {scenario.grid}")


def r_weights(account: AccountParams, grid: TimeGrid) -> np.ndarray:
    """R(t_k)^{-1} for k = 1..N-1."""
    k = np.arange(1, grid.N)
    return 1.0 / _R_closed(grid.T - k * grid.dt, account.r, account.gamma)


def growth_factors(account: AccountParams, grid: TimeGrid) -> np.ndarray:
    """Gamma^{-1} e^{r(T - t_k)} for k = 0..N-1."""
    k = np.arange(grid.N)
    return np.exp(account.r * (grid.T - k * grid.dt)) / account.gamma


def accumulate(
    level0: np.ndarray,
    claim_increments: np.ndarray,
    start_cash: np.ndarray,
    account: AccountParams,
    grid: TimeGrid,
    scale: float = 1.0,
):
    """Run the M / mu / u / x recursions for claim increments at t_1..t_{N-1}.

    ``level0`` is the R(0)-scaled constant part of mu. Returns (u, x, M, mu).
    """
    N, dt = grid.N, grid.dt
    m = claim_increments.shape[0]
    M = np.zeros((m, N))
    w = r_weights(account, grid)
    for k in range(1, N):
        M[:, k] = M[:, k - 1] + w[k - 1] * claim_increments[:, k - 1]
    mu = level0[:, None] + M
    u = scale * (growth_factors(account, grid) * mu)

    accrual = math.exp(account.r * dt)
    x = np.empty((m, N + 1))
    x[:, 0] = start_cash
    for k in range(1, N + 1):
        x[:, k] = (x[:, k - 1] + u[:, k - 1] * dt) * accrual
    return u, x, M, mu


def replicate(paths: PathSet, scenario: Scenario) -> ReplicationResult:
    """Replicate each asset's terminal price S(T) with an interest-bearing account."""
    _check_grid(paths, scenario)
    acc, grid = scenario.account, scenario.grid
    start = np.asarray(acc.start_cash, dtype=float)
    S0 = paths.prices[:, 0]
    R0 = capital_R(0.0, acc, grid)
    level0 = (S0 - math.exp(acc.r * grid.T) * start) / R0
    u, x, M, mu = accumulate(level0, paths.increments[:, : grid.N - 1], start, acc, grid)
    target = paths.prices[:, -1].copy()
    return ReplicationResult(u, x, M, mu, target, x[:, -1] - target, grid, paths)


def direct_sum_oracle(paths: PathSet, scenario: Scenario) -> np.ndarray:
    """Terminal cash as an explicit discounted sum of deposits.

    Evaluates e^{rT} a + sum_k u(t_k) dt e^{r(T - t_k)} with u rebuilt from
    cumulative sums, sharing nothing with the x recursion.
    """
    if scenario.mode == EXCESS_REPLICATION:
        from .option import excess_claim

        _check_grid(paths, scenario)
        H0, df, _ = excess_claim(paths, scenario)
        start = np.zeros(1)
        level = np.array([H0])
        increments = df[None, :]
        scale = scenario.option.c
    else:
        _check_grid(paths, scenario)
        start = np.asarray(scenario.account.start_cash, dtype=float)
        level = paths.prices[:, 0] - math.exp(scenario.account.r * scenario.grid.T) * start
        increments = paths.increments[:, : scenario.grid.N - 1]
        scale = 1.0

    acc, grid = scenario.account, scenario.grid
    r, T, dt, N = acc.r, grid.T, grid.dt, grid.N
    R0 = capital_R(0.0, acc, grid)
    out = np.empty(len(start))
    for i in range(len(start)):
        weighted = [increments[i, j - 1] / capital_R(j * dt, acc, grid) for j in range(1, N)]
        martingale = np.concatenate(([0.0], np.cumsum(weighted)))
        terms = [
            scale * math.exp(r * (T - k * dt)) / acc.gamma * (level[i] / R0 + martingale[k])
            * dt * math.exp(r * (T - k * dt))
            for k in range(N)
        ]
        out[i] = math.exp(r * T) * start[i] + math.fsum(terms)
    return out


def aggregate_totals(result: ReplicationResult) -> Totals:
    """Sum cash, claim and gap across assets held in one account."""
    cash = result.x[0].copy()
    for i in range(1, result.m):
        cash += result.x[i]
    target = math.fsum(result.target)
    gap = math.fsum(result.terminal_gap)
    return Totals(cash, target, gap)
