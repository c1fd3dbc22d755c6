import csv
import logging

import pytest

from lab_logging.log_helper import setup_recursive_logger

setup_recursive_logger(logging.INFO)
logger = logging.getLogger(__name__)

import app
from interval_exchange import runner
from interval_exchange.config.experiment_config import validate_config
from interval_exchange.reports.csv_report import TRACE_HEADER
from interval_exchange.reports.json_report import read_report, timing_path


def _rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def test_cf_report(tmp_path):
    out = tmp_path / "cf.json"
    argv = ["cf", "--alpha", "sqrt(5)/2-1/2", "--depth", "10", "--out", str(out)]
    assert app.main(argv) == 0
    report = read_report(out)
    assert report["exit_code"] == 0
    assert report["payload"]["q"] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert report["payload"]["period"] == [1]
    assert report["config"]["parameters"]["depth"] == "10"
    assert timing_path(out).exists()


def test_exact_gauge_writes_paired_csv_and_json(tmp_path):
    out = tmp_path / "gauge.csv"
    code = app.main(
        [
            "gauge",
            "--iet",
            "rot: alpha=golden",
            "--x",
            "1/3",
            "--metric",
            "circle",
            "--horizon",
            "8,64",
            "--exact",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rows = _rows(out)
    assert rows[0] == TRACE_HEADER
    assert [row[3] for row in rows[1:]] == ["8", "64"]
    assert "sqrt(5)" in rows[-1][4]
    assert read_report(out.with_suffix(".json"))["payload"]["kind"] == "rho"


def test_sampled_gauge_is_reproducible(tmp_path):
    out = tmp_path / "sampled.csv"
    argv = [
        "gauge",
        "--iet",
        "iet: lengths=[1/2-sqrt(5)/10, 1/4, 1/4+sqrt(5)/10] perm=[3,1,2]",
        "--kind",
        "psi",
        "--pairs",
        "3",
        "--seed",
        "11",
        "--horizon",
        "dyadic:256",
        "--out",
        str(out),
    ]
    assert app.main(argv) == 0
    first = (out.read_bytes(), out.with_suffix(".json").read_bytes())
    assert app.main(argv) == 0
    second = (out.read_bytes(), out.with_suffix(".json").read_bytes())
    assert first == second
    assert len(_rows(out)) == 1 + 3 * 8


def test_plot_subcommand(tmp_path):
    out = tmp_path / "trace.csv"
    argv = ["gauge", "--iet", "rot: alpha=golden", "--pairs", "2", "--out", str(out)]
    assert app.main(argv) == 0
    assert app.main(["plot", "--csv", str(out), "--kind", "histogram"]) == 0
    assert out.with_suffix(".svg").exists()


def test_user_errors_exit_with_one(tmp_path):
    assert app.main(["cf", "--alpha", "1/3"]) == 1
    assert app.main(["paint"]) == 1
    assert app.main(["run"]) == 1
    assert app.main(["gauge", "--iet", "iet: lengths=[1/2,1/3] perm=[2,1]"]) == 1
    assert app.main(["plot", "--csv", str(tmp_path / "missing.csv")]) == 1


def test_violations_exit_with_two(tmp_path, monkeypatch):
    monkeypatch.setattr(
        runner, "check_convergent_ineq", lambda cf, alpha: [(0, False)]
    )
    out = tmp_path / "cf.json"
    assert app.main(["cf", "--alpha", "golden", "--out", str(out)]) == 2
    report = read_report(out)
    assert report["exit_code"] == 2
    assert report["payload"]["violations"] == ["||alpha q_0|| >= 1/q_1"]


def test_run_stored_config(tmp_path):
    out = tmp_path / "book.json"
    config = tmp_path / "book.ini"
    config.write_text(
        "[experiment]\nexperiment = towerbook\n\n[parameters]\nk = 3\n\n"
        "[output]\njson = " + str(out) + "\n",
        encoding="utf-8",
    )
    assert app.main(["run", "--config", str(config)]) == 0
    payload = read_report(out)["payload"]
    assert payload["b"][0] == [1, 4, 1, 1]


def test_mix3_scenario(tmp_path):
    out = tmp_path / "mix.json"
    argv = ["mix3", "--alpha", "golden", "--t", "19/20", "--mrange", "6:8"]
    assert app.main(argv + ["--out", str(out)]) == 0
    assert all(count >= 6 for count in read_report(out)["payload"]["missed_counts"])


@pytest.mark.slow
def test_mix3_full_range(tmp_path):
    out = tmp_path / "mix.json"
    argv = ["mix3", "--alpha", "golden", "--t", "19/20", "--mrange", "6:14"]
    assert app.main(argv + ["--out", str(out)]) == 0


def test_tau_and_chebyshev_tables(tmp_path):
    tau = tmp_path / "tau.csv"
    argv = ["tau", "--iet", "rot: alpha=golden", "--n-max", "64", "--out", str(tau)]
    assert app.main(argv) == 0
    assert _rows(tau)[0] == ["n", "card_delta_prime"]
    assert all(row[1] == "1" for row in _rows(tau)[1:])

    cheb = tmp_path / "cheb.csv"
    argv = ["chebyshev", "--alpha", "golden", "--samples", "4", "--horizon", "256"]
    assert app.main(argv + ["--out", str(cheb)]) == 0
    assert len(_rows(cheb)) == 5


def test_runner_returns_report():
    config = validate_config(
        {"experiment": "kesten", "target": "sqrt(2)-1", "parameters": {"m": "1:6"}}
    )
    report = runner.run(config)
    assert report.exit_code == 0
    assert [entry["m"] for entry in report.payload["checks"]] == [1, 2, 3, 4, 5, 6]


def _gauge_config(horizons: str, **extra) -> dict:
    return {
        "experiment": "gauge",
        "target": "rot: alpha=golden",
        "horizons": horizons,
        "parameters": {"kind": "rho", "pairs": "2", "metric": "circle"},
        **extra,
    }


def test_sampled_gauge_is_exact_up_to_the_limit():
    report = runner.run(validate_config(_gauge_config("dyadic:256")))
    assert report.exit_code == 0
    assert report.payload["exact"] is True
    for trace in report.payload["traces"]:
        assert all(value is not None for value in trace["exact_min"])
        assert "sqrt(5)" in trace["exact_min"][-1]


def test_forced_float_gauge_has_no_exact_minima():
    config = validate_config(_gauge_config("dyadic:256", exact=False))
    report = runner.run(config)
    assert report.payload["exact"] is False
    for trace in report.payload["traces"]:
        assert trace["exact_min"][:-1] == [None] * 7


@pytest.mark.slow
def test_sampled_gauge_uses_floats_beyond_the_limit():
    report = runner.run(validate_config(_gauge_config("100001")))
    assert report.payload["exact"] is False


def test_mix3_lists_every_requested_m(tmp_path):
    out = tmp_path / "mix.csv"
    argv = ["mix3", "--alpha", "golden", "--t", "19/20", "--mrange", "1,6"]
    assert app.main(argv + ["--out", str(out)]) == 0
    rows = _rows(out)
    assert [row[0] for row in rows[1:]] == ["1", "6"]
    assert rows[1][4] == ""
    assert read_report(out.with_suffix(".json"))["payload"]["skipped"][0]["m"] == 1
