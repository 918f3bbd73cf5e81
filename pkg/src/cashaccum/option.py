"""Black-Scholes call quotes and replication of a proportion of the equity excess."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AccountParams, OptionSpec, Scenario, TimeGrid
from .errors import ExpiredOption, NonPositivePrice
from .kernel import ReplicationResult, _check_grid, accumulate, capital_R
from .paths import PathSet

_SQRT2 = math.sqrt(2.0)


def norm_cdf(z: float) -> float:
    """Standard normal CDF, Phi(z) = erfc(-z / sqrt 2) / 2.

    Going through the complementary error function keeps full relative
    precision in the lower tail, where 1 + erf(x) would cancel.
    """
    return 0.5 * math.erfc(-z / _SQRT2)


@dataclass(frozen=True)
class BsQuote:
    d1: float
    d2: float
    delta: float
    price: float


def bs_quote(
    S: float,
    t: float,
    spec: OptionSpec,
    account: AccountParams,
    grid: TimeGrid,
    sigma: float,
) -> BsQuote:
    if S <= 0:
        raise NonPositivePrice(f"Black-Scholes needs S > 0, got {S}")
    tau = grid.T - t
    if tau <= 0:
        raise ExpiredOption(f"option expired: t={t} >= T={grid.T}")
    r, K = account.r, spec.K
    vol = sigma * math.sqrt(tau)
    d1 = (math.log(S / K) + (r + 0.5 * sigma * sigma) * tau) / vol
    d2 = d1 - vol
    delta = norm_cdf(d1)
    price = delta * S - norm_cdf(d2) * K * math.exp(-r * tau)
    return BsQuote(d1, d2, delta, price)


@dataclass(frozen=True, eq=False)
class ExcessResult(ReplicationResult):
    f: np.ndarray  # f(t_0..t_{N-1}); f(t_0) = H(S0, 0)
    H0: float
    c: float


def excess_claim(paths: PathSet, scenario: Scenario):
    """Delta-weighted claim increments for the excess mode.

    Returns ``(H0, df, f)`` where ``df[k-1] = N(d1(t_k)) sigma dS(t_k)`` for
    k = 1..N-1 and ``f`` is the running claim starting at H0, floored at zero
    when the option asks for it.
    """
    prices = paths.prices[0]
    if np.any(prices <= 0):
        k = int(np.argmax(prices <= 0))
        raise NonPositivePrice(f"price path hits {prices[k]:.6g} at step {k}; excess mode needs S > 0")
    spec, acc, grid = scenario.option, scenario.account, scenario.grid
    sigma = scenario.market.sigma[0]
    N, dt = grid.N, grid.dt

    H0 = bs_quote(prices[0], 0.0, spec, acc, grid, sigma).price
    df = np.empty(N - 1)
    f = np.empty(N)
    f[0] = H0
    for k in range(1, N):
        delta = bs_quote(prices[k], k * dt, spec, acc, grid, sigma).delta
        df[k - 1] = delta * sigma * paths.increments[0, k - 1]
        nxt = f[k - 1] + df[k - 1]
        f[k] = max(nxt, 0.0) if spec.floor_at_zero else nxt
    return H0, df, f


def replicate_excess(paths: PathSet, scenario: Scenario) -> ExcessResult:
    """Accumulate cash matching c * f, with f driven by delta-weighted increments.

    The account starts empty. The claim is known on t_0..t_{N-1}; the target
    at T is c * f(t_{N-1}).
    """
    _check_grid(paths, scenario)
    acc, grid, c = scenario.account, scenario.grid, scenario.option.c
    H0, df, f = excess_claim(paths, scenario)
    level0 = np.array([H0 / capital_R(0.0, acc, grid)])
    u, x, M, mu = accumulate(level0, df[None, :], np.zeros(1), acc, grid, scale=c)
    target = np.array([c * f[-1]])
    return ExcessResult(
        u=u, x=x, M=M, mu=mu, target=target, terminal_gap=x[:, -1] - target,
        grid=grid, paths=paths, f=f, H0=H0, c=c,
    )
