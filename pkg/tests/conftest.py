import math

import pytest

from cashaccum.core import (
    ASSET_REPLICATION,
    EXCESS_REPLICATION,
    AccountParams,
    MarketParams,
    OptionSpec,
    Scenario,
    TimeGrid,
)
from cashaccum.presets import PRESETS
from cashaccum.scenario_io import parse_scenario


def asset_scenario(S0=150.0, sigma=0.5, r=0.12, start_cash=50.0, T=1.0, N=365, gamma=1.0,
                   drift=0.0, seed=1, m=1, quantity=None):
    return Scenario(
        ASSET_REPLICATION,
        TimeGrid(T, N),
        MarketParams.uniform(m, S0, drift, sigma),
        AccountParams(r, (start_cash,) * m, gamma),
        seed=seed,
        quantity=quantity,
    )


def excess_scenario(S0=75.0, sigma=0.3, r=0.03, K=30.0, c=0.5, T=2.0, N=365, seed=3,
                    floor_at_zero=True, gamma=1.0):
    return Scenario(
        EXCESS_REPLICATION,
        TimeGrid(T, N),
        MarketParams.uniform(1, S0, 0.0, sigma),
        AccountParams(r, (0.0,), gamma),
        OptionSpec(K, c, floor_at_zero),
        seed=seed,
    )


def prefunded_cash(S0=150.0, r=0.12, T=1.0):
    return S0 * math.exp(-r * T)


@pytest.fixture
def example1():
    return parse_scenario(PRESETS["example1"])


@pytest.fixture
def example2():
    return parse_scenario(PRESETS["example2"])


@pytest.fixture
def example3():
    return parse_scenario(PRESETS["example3"])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
