"""Seeded Wiener increments and Euler-discretised GBM price paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MarketParams, TimeGrid


class NormalStream:
    """Reproducible standard normal variates.

    Asset ``i`` draws from its own PCG64 generator seeded with
    ``SeedSequence(seed, spawn_key=(i,))``, so row ``i`` does not depend on
    how many other assets are simulated. Uniforms are turned into normals
    with the Box-Muller transform; both the cosine and sine outputs are used.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._generators: dict[int, np.random.Generator] = {}

    def _generator(self, i: int) -> np.random.Generator:
        gen = self._generators.get(i)
        if gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(i,))
            gen = self._generators[i] = np.random.Generator(np.random.PCG64(ss))
        return gen

    def normals(self, i: int, n: int) -> np.ndarray:
        """Next ``n`` standard normal draws of sub-stream ``i``."""
        pairs = (n + 1) // 2
        u = self._generator(i).random((2, pairs))
        radius = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u in (0, 1]
        angle = 2.0 * np.pi * u[1]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:n]

    def standard_normal(self, m: int, n: int) -> np.ndarray:
        return np.stack([self.normals(i, n) for i in range(m)])


def wiener_increments(stream: NormalStream, m: int, N: int, dt: float) -> np.ndarray:
    """m x N array of independent N(0, dt) increments."""
    return stream.standard_normal(m, N) * np.sqrt(dt)


@dataclass(frozen=True, eq=False)
class PathSet:
    prices: np.ndarray  # m x (N+1), prices[:, 0] = S0
    increments: np.ndarray  # m x N, increments[:, k-1] = dS(t_k)
    grid: TimeGrid

    @property
    def m(self) -> int:
        return self.prices.shape[0]


def paths_from_increments(S0, increments: np.ndarray, grid: TimeGrid) -> PathSet:
    """Build a PathSet by cumulating given price increments onto S0."""
    increments = np.atleast_2d(np.asarray(increments, dtype=float))
    m, N = increments.shape
    prices = np.empty((m, N + 1))
    prices[:, 0] = S0
    for k in range(N):
        prices[:, k + 1] = prices[:, k] + increments[:, k]
    return PathSet(prices, increments, grid)


def simulate_paths(
    market: MarketParams,
    grid: TimeGrid,
    stream: NormalStream,
    quantity=None,
) -> PathSet:
    """Euler scheme dS = S (a dt + sigma dW), stepped on the previous price.

    ``quantity`` multiplies each asset's initial price, which scales the whole
    path and every increment by the same factor. Negative prices are not
    clipped.
    """
    m, N, dt = market.m, grid.N, grid.dt
    dW = wiener_increments(stream, m, N, dt)
    S0 = np.asarray(market.S0, dtype=float)
    if quantity is not None:
        S0 = S0 * np.asarray(quantity, dtype=float)
    drift_dt = np.asarray(market.drift, dtype=float) * dt
    sigma = np.asarray(market.sigma, dtype=float)

    prices = np.empty((m, N + 1))
    increments = np.empty((m, N))
    prices[:, 0] = S0
    for k in range(N):
        inc = prices[:, k] * (drift_dt + sigma * dW[:, k])
        increments[:, k] = inc
        prices[:, k + 1] = prices[:, k] + inc
    return PathSet(prices, increments, grid)
