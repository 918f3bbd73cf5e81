import csv
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cashaccum.analysis import run_scenario
from cashaccum.core import (
    ASSET_REPLICATION,
    EXCESS_REPLICATION,
    AccountParams,
    MarketParams,
    OptionSpec,
    Scenario,
    TimeGrid,
)
from cashaccum.errors import InvalidGrid, MissingKey, ParseError, UnknownKey
from cashaccum.presets import PRESETS
from cashaccum.scenario_io import (
    SERIES_HEADER,
    parse_scenario,
    render_scenario,
    write_excess_csv,
    write_series_csv,
)

EXAMPLE1_FILE = """\
mode=asset_replication
T=1
N=365
m=1
S0=150
sigma=0.5
r=0.12
start_cash=50
"""


def test_example1_file():
    s = parse_scenario(EXAMPLE1_FILE)
    assert s.mode == ASSET_REPLICATION
    assert s.grid == TimeGrid(1.0, 365)
    assert s.market == MarketParams((150.0,), (0.0,), (0.5,))
    assert s.account == AccountParams(0.12, (50.0,), 1.0)
    assert s.seed == 0 and s.quantity == (1,)


def test_comments_and_blank_lines():
    s = parse_scenario("# header\n\n" + EXAMPLE1_FILE.replace("N=365", "N=365   # daily"))
    assert s.grid.N == 365


def test_strike_rejected_in_asset_mode():
    with pytest.raises(UnknownKey, match="not valid for mode"):
        parse_scenario(EXAMPLE1_FILE + "K=30\n")


def test_total_start_cash_split():
    s = parse_scenario(PRESETS["example2"])
    assert s.account.start_cash == (20.0, 20.0)
    assert s.market.S0 == (200.0, 400.0)


def test_explicit_start_cash_vector():
    s = parse_scenario(PRESETS["example2"].replace("start_cash=40", "start_cash=10,30"))
    assert s.account.start_cash == (10.0, 30.0)


def test_unknown_key_reports_line():
    with pytest.raises(UnknownKey) as exc:
        parse_scenario(EXAMPLE1_FILE + "volatility=0.2\n")
    assert exc.value.lineno == 9


def test_malformed_line():
    with pytest.raises(ParseError) as exc:
        parse_scenario("mode=asset_replication\nT 1\n")
    assert exc.value.lineno == 2


def test_bad_number():
    with pytest.raises(ParseError, match="N"):
        parse_scenario(EXAMPLE1_FILE.replace("N=365", "N=3.5"))


def test_duplicate_key():
    with pytest.raises(ParseError, match="duplicate"):
        parse_scenario(EXAMPLE1_FILE + "r=0.1\n")


def test_missing_key():
    with pytest.raises(MissingKey):
        parse_scenario(EXAMPLE1_FILE.replace("r=0.12\n", ""))
    with pytest.raises(MissingKey):
        parse_scenario(PRESETS["example3"].replace("K=30\n", ""))


def test_validation_runs_after_parsing():
    with pytest.raises(InvalidGrid):
        parse_scenario(EXAMPLE1_FILE.replace("N=365", "N=1"))


def test_overrides_replace_values():
    s = parse_scenario(EXAMPLE1_FILE, {"N": "100", "seed": "9"})
    assert s.grid.N == 100 and s.seed == 9


def test_shipped_scenario_files_match_presets():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "scenarios"
    for name, text in PRESETS.items():
        assert parse_scenario((root / f"{name}.cfg").read_text()) == parse_scenario(text)


pos = st.floats(0.01, 1e4, allow_nan=False)


@st.composite
def scenarios(draw):
    m = draw(st.integers(1, 4))
    excess = m == 1 and draw(st.booleans())
    sigma = tuple(draw(st.lists(st.floats(0.01 if excess else 0.0, 2.0), min_size=m, max_size=m)))
    market = MarketParams(
        tuple(draw(st.lists(pos, min_size=m, max_size=m))),
        tuple(draw(st.lists(st.floats(-1.0, 1.0), min_size=m, max_size=m))),
        sigma,
    )
    account = AccountParams(
        draw(st.floats(0.0, 0.5)),
        tuple(draw(st.lists(st.floats(-1e3, 1e3), min_size=m, max_size=m))),
        draw(st.floats(0.01, 10.0)),
    )
    option = None
    if excess:
        option = OptionSpec(draw(pos), draw(st.floats(0.0, 1.0)), draw(st.booleans()))
    return Scenario(
        EXCESS_REPLICATION if excess else ASSET_REPLICATION,
        TimeGrid(draw(st.floats(0.01, 30.0)), draw(st.integers(2, 100000))),
        market,
        account,
        option,
        draw(st.integers(0, 2**64 - 1)),
        tuple(draw(st.lists(st.integers(1, 50), min_size=m, max_size=m))),
    )


@given(scenarios())
@settings(max_examples=200)
def test_render_round_trip(s):
    assert parse_scenario(render_scenario(s)) == s


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_series_csv_single_asset(tmp_path, example1):
    path = tmp_path / "out.csv"
    write_series_csv(run_scenario(example1), path)
    rows = _rows(path)
    assert tuple(rows[0]) == SERIES_HEADER
    body = rows[1:]
    assert len(body) == 366
    assert body[0][:4] == ["0", "0", "150", "50"]
    assert body[-1][0] == "1" and body[-1][4] == ""
    assert all(r[4] != "" for r in body[:-1])


def test_series_csv_total_rows(tmp_path, example2):
    path = tmp_path / "out.csv"
    res = run_scenario(example2)
    write_series_csv(res, path)
    body = _rows(path)[1:]
    assert len(body) == 3 * 366
    assert [r[1] for r in body[::366]] == ["0", "1", "total"]
    total = [r for r in body if r[1] == "total"]
    assert total[0][2] == "600" and total[0][3] == "40"
    assert float(total[-1][3]) == pytest.approx(res.x[:, -1].sum(), rel=1e-11)


def test_series_csv_deterministic(tmp_path, example1):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_series_csv(run_scenario(example1), a)
    write_series_csv(run_scenario(example1), b)
    assert a.read_bytes() == b.read_bytes()


def test_twelve_significant_digits(tmp_path, example1):
    path = tmp_path / "out.csv"
    write_series_csv(run_scenario(example1), path)
    for row in _rows(path)[1:50]:
        for cell in (row[2], row[3], row[4]):
            digits = cell.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
            assert len(digits) <= 12


def test_excess_csv(tmp_path, example3):
    path = tmp_path / "ex.csv"
    res = run_scenario(example3)
    write_excess_csv(res, path)
    rows = _rows(path)
    assert rows[0] == ["time", "excess", "cash"]
    assert len(rows) == 367
    assert float(rows[1][1]) == pytest.approx(0.5 * res.H0, rel=1e-11)
    assert rows[1][2] == "0"
    assert float(rows[-1][1]) == pytest.approx(res.target[0], rel=1e-11)


def test_write_into_missing_directory(tmp_path, example1):
    with pytest.raises(OSError):
        write_series_csv(run_scenario(example1), tmp_path / "nope" / "out.csv")
