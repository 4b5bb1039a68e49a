import csv
import io
import json

import pytest
from click.testing import CliRunner

from langtrotter.arith import sieve_primes
from langtrotter.chebotarev import CountReport
from langtrotter.cli import main, parse_x
from langtrotter.elliptic import EllipticCurve, bad_primes


@pytest.fixture
def runner(tmp_path, monkeypatch):
    monkeypatch.setenv("LT_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("LT_VERIFY_INJECT_FAULT", raising=False)
    return CliRunner()


def test_parse_x():
    assert parse_x("1e6") == 10**6
    assert parse_x("2.5e5") == 250000
    assert parse_x("1000") == 1000
    for bad in ("1.5", "abc", "1e-3", "inf"):
        with pytest.raises(ValueError):
            parse_x(bad)


def test_ap_writes_one_row_per_good_prime(runner, tmp_path):
    out = tmp_path / "ap.csv"
    res = runner.invoke(main, ["ap", "--curve", "1,1", "--x", "1000", "--out", str(out)])
    assert res.exit_code == 0, res.output
    rows = out.read_text().splitlines()
    E = EllipticCurve(1, 1)
    assert len(rows) - 1 == len(sieve_primes(1000)) - len(bad_primes(E, 1000))
    first = out.read_bytes()
    assert runner.invoke(main, ["ap", "--curve", "1,1", "--x", "1e3", "--out", str(out)]).exit_code == 0
    assert out.read_bytes() == first


def test_ap_shards_do_not_change_output(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    runner.invoke(main, ["ap", "--curve", "2,3", "--x", "5000", "--out", str(a)])
    runner.invoke(main, ["ap", "--curve", "2,3", "--x", "5000", "--out", str(b), "--shards", "3"])
    assert a.read_bytes() == b.read_bytes()


def test_ap_tiny_x(runner, tmp_path):
    out = tmp_path / "e.csv"
    res = runner.invoke(main, ["ap", "--x", "2", "--out", str(out)])
    assert res.exit_code == 0
    assert out.read_text() == "p,a,ordinary,D,d\n"


def test_ap_unwritable_path(runner, tmp_path):
    res = runner.invoke(main, ["ap", "--x", "100", "--out", str(tmp_path / "missing" / "a.csv")])
    assert res.exit_code == 2
    assert "cannot write" in res.output


def test_usage_errors(runner):
    assert runner.invoke(main, ["ap", "--x", "1.5"]).exit_code == 2
    assert runner.invoke(main, ["ap", "--curve", "0,0", "--x", "10"]).exit_code == 2
    assert runner.invoke(main, ["count", "--kind", "PEa"]).exit_code == 2
    assert runner.invoke(main, ["count", "--kind", "sweep"]).exit_code == 2
    assert runner.invoke(main, ["count", "--kind", "piC", "--x", "100", "--pred", "foo", "--compute"]).exit_code == 2


def test_count_needs_cache_or_compute(runner):
    res = runner.invoke(main, ["count", "--kind", "PEa", "--a", "0", "--x", "1e4"])
    assert res.exit_code == 2 and "--compute" in res.output
    res = runner.invoke(main, ["count", "--kind", "PEa", "--a", "0", "--x", "1e4", "--compute"])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert {"x", "observed", "expected", "fraction", "margin"} <= set(rep)
    # now cached
    again = runner.invoke(main, ["count", "--kind", "PEa", "--a", "0", "--x", "5e3"])
    assert again.exit_code == 0


def test_count_json_round_trips(runner):
    res = runner.invoke(main, ["count", "--kind", "piC", "--ell", "7", "--pred", "det=3", "--x", "2e4", "--compute"])
    rep = CountReport.from_json(res.output)
    assert rep.kind == "pi_C" and rep.fraction == pytest.approx(1 / 6)
    assert CountReport.from_json(rep.to_json()) == rep


def test_count_PEk_has_principality_summary(runner):
    res = runner.invoke(main, ["count", "--kind", "PEk", "--d", "-4", "--x", "3e4", "--compute"])
    rep = json.loads(res.output)
    assert rep["extra"]["principal_failures"] == [] and rep["extra"]["principal_checked"] > 0


def test_count_sweep_csv(runner):
    res = runner.invoke(main, ["count", "--kind", "sweep", "--xs", "1e3,1e4,3e4", "--compute"])
    assert res.exit_code == 0
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0][:3] == ["x", "observed", "expected"]
    assert [r[0] for r in rows[1:]] == ["1000", "10000", "30000"]


@pytest.mark.parametrize("kind", ["DE", "pitilde", "smoothed"])
def test_other_kinds(runner, kind):
    res = runner.invoke(main, ["count", "--kind", kind, "--x", "2e4", "--compute", "--format", "csv"])
    assert res.exit_code == 0, res.output
    assert len(res.output.splitlines()) == 2


def test_count_output_file(runner, tmp_path):
    out = tmp_path / "r.json"
    res = runner.invoke(main, ["count", "--kind", "DE", "--x", "1e4", "--compute", "--out", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["extra"]["partition_residual"] == 0


def test_verify_filtered(runner):
    res = runner.invoke(main, ["verify", "--suite", "borel-cardinalities", "--ell", "13"])
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert len(lines) == 1 and lines[0].startswith("PASS borel-cardinalities")


def test_verify_injected_fault(runner, monkeypatch):
    monkeypatch.setenv("LT_VERIFY_INJECT_FAULT", "mixed-cardinalities")
    res = runner.invoke(main, ["verify", "--suite", "borel-cardinalities", "--suite", "mixed-cardinalities", "--ell", "5"])
    assert res.exit_code == 1
    assert res.output.splitlines()[0].startswith("PASS")
    assert res.output.splitlines()[1].startswith("FAIL mixed-cardinalities")


def test_groups_and_rayclass(runner):
    res = runner.invoke(main, ["groups", "--ell", "5", "--a", "0", "--d", "-4"])
    out = json.loads(res.output)
    assert (out["G"], out["B"], out["U"], out["B/U"], out["C'"], out["C''"], out["mixed"]) == (480, 80, 5, 16, 4, 1, 480)
    res = runner.invoke(main, ["rayclass", "--d", "-3", "--m", "5", "--bruteforce"])
    assert res.exit_code == 0 and json.loads(res.output)["order"] == 4 == json.loads(res.output)["bruteforce"]
    assert runner.invoke(main, ["rayclass", "--d", "-4", "--m", "3"]).exit_code == 2
    assert runner.invoke(main, ["rayclass", "--d", "-12", "--m", "5"]).exit_code == 2
