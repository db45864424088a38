import json
import os

import jsonschema
import numpy as np
import pytest

from xispec import cli
from xispec.errors import NonConvergenceError
from xispec.report import get_report_schema
from xispec.specfun import xi_critical


@pytest.fixture(autouse=True)
def _workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("NO_COLOR", "1")
    return tmp_path


def run(args):
    return cli.main(args)


def test_zeros_rows(capsys):
    assert run(["zeros", "--t-max", "30", "--tol", "1e-8"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3
    first = out[0].split(",")
    assert first[0] == "1"
    assert float(first[1]) == pytest.approx(14.134725141734693, abs=1e-6)
    assert float(first[2]) <= 1e-8


def test_zeros_cache_reuse_is_identical(capsys):
    assert run(["zeros", "--t-max", "30", "--cache", "zeros.csv"]) == 0
    first = capsys.readouterr().out
    assert os.path.exists("zeros.csv")
    assert run(["zeros", "--t-max", "30", "--cache", "zeros.csv"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_zeros_bad_flag_exit_code():
    assert run(["zeros", "--t-max", "-1"]) == 2


def test_cache_corruption_exit_code(capsys):
    assert run(["zeros", "--t-max", "30", "--cache", "zeros.csv"]) == 0
    raw = open("zeros.csv", "rb").read().replace(b"14.13", b"14.15", 1)
    with open("zeros.csv", "wb") as handle:
        handle.write(raw)
    assert run(["zeros", "--t-max", "30", "--cache", "zeros.csv"]) == 3


def test_audit_eq5_report(capsys):
    assert run(["audit", "eq5", "--out", "reports"]) == 0
    payload = json.loads(open("reports/audit_eq5.json").read())
    jsonschema.validate(payload, get_report_schema())
    assert payload["verdict"] == "CONSISTENT_UP_TO_CONSTANT"
    assert payload["params"]["claimed_coefficient"] == 0.125
    assert payload["params"]["standard_coefficient"] == 0.5
    assert payload["params"]["implied_coefficient"] == pytest.approx(0.5, rel=1e-8)
    out = capsys.readouterr().out
    assert "CONSISTENT_UP_TO_CONSTANT" in out
    assert "\x1b[" not in out  # NO_COLOR honored


def test_audit_coincidence_perturbed_fails(capsys):
    code = run(
        [
            "audit", "coincidence", "--perturb", "0.01",
            "--n-zeros", "50", "--out", "reports",
        ]
    )
    assert code == 1
    payload = json.loads(open("reports/audit_coincidence.json").read())
    assert payload["verdict"] == "DISTINCT"
    assert payload["params"]["perturb"] == 0.01


def test_audit_all_aggregate_and_determinism():
    args = ["audit", "all", "--t-max", "40", "--n-zeros", "50", "--cache", "zeros_all.csv"]
    assert run(args + ["--out", "r1"]) == 0
    assert run(args + ["--out", "r2"]) == 0
    names = sorted(os.listdir("r1"))
    assert "audit_all.json" in names
    for name in names:
        assert open(f"r1/{name}", "rb").read() == open(f"r2/{name}", "rb").read()
    aggregate = json.loads(open("r1/audit_all.json").read())
    assert len(aggregate["audits"]) == 5
    for entry in aggregate["audits"]:
        jsonschema.validate(entry, get_report_schema())
    assert aggregate["metadata"]["tool"] == "xispec"
    assert "em_order_cap" in aggregate["metadata"]


def test_parallelism_does_not_change_bytes():
    args = ["audit", "all", "--t-max", "40", "--n-zeros", "50", "--cache", "zeros_thr.csv"]
    assert run(args + ["--threads", "1", "--out", "t1"]) == 0
    assert run(args + ["--threads", "4", "--out", "t4"]) == 0
    for name in sorted(os.listdir("t1")):
        assert open(f"t1/{name}", "rb").read() == open(f"t4/{name}", "rb").read()


def test_plot_remaining_targets():
    assert run(["plot", "eq5-ratio", "--out", "ratio.svg"]) == 0
    assert os.path.exists("ratio.svg")
    assert run(["plot", "residuals", "--out", "res.svg"]) == 0
    assert os.path.exists("res.svg")


def test_audit_csv_format():
    assert run(
        ["audit", "eq5", "--format", "csv", "--out", "reports_csv"]
    ) == 0
    rows = open("reports_csv/audit_eq5.csv").read().strip().splitlines()
    assert rows[0].startswith("order_kind,order_magnitude")
    assert len(rows) == 13


def test_audit_all_csv_aggregate():
    assert run(
        [
            "audit", "all", "--format", "csv", "--t-max", "40",
            "--n-zeros", "50", "--cache", "zeros_csv.csv", "--out", "allcsv",
        ]
    ) == 0
    rows = open("allcsv/audit_all.csv").read().strip().splitlines()
    assert rows[0].startswith("name,verdict")
    assert len(rows) == 6
    assert sorted(os.listdir("allcsv")) == [
        "audit_all.csv",
        "audit_carlson.csv",
        "audit_coincidence.csv",
        "audit_eq5.csv",
        "audit_eq9.csv",
        "audit_hadamard.csv",
    ]


def test_cache_mismatch_recomputes(capsys):
    assert run(["zeros", "--t-max", "30", "--cache", "zc.csv", "--tol", "1e-6"]) == 0
    capsys.readouterr()
    # different tolerance: the cache must be ignored and rewritten
    assert run(["zeros", "--t-max", "30", "--cache", "zc.csv", "--tol", "1e-8"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3
    header = open("zc.csv").readline()
    assert "tol=1e-08" in header


def test_audit_exit_4_on_numerical_failure(monkeypatch):
    def boom(cfg):
        raise NonConvergenceError("synthetic")

    monkeypatch.setitem(cli._AUDIT_RUNNERS, "eq9", boom)
    assert run(["audit", "eq9", "--out", "reports"]) == 4


def test_plot_xi_critical_crosses_zero_three_times():
    assert run(["plot", "xi-critical", "--t", "0:30", "--out", "xi.svg"]) == 0
    svg = open("xi.svg").read()
    assert svg.startswith("<?xml")
    assert "<polyline" in svg
    # the plotted data: recompute on the same grid and count sign changes
    ts = np.linspace(0.0, 30.0, 601)
    values = [xi_critical(float(t)) for t in ts]
    signs = np.sign(values)
    crossings = int(np.sum(signs[:-1] * signs[1:] < 0))
    assert crossings == 3
    assert run(["plot", "xi-critical", "--t", "0:30", "--out", "xi2.svg"]) == 0
    assert open("xi.svg", "rb").read() == open("xi2.svg", "rb").read()


def test_plot_empty_range_exit_code():
    assert run(["plot", "xi-critical", "--t", "5:5", "--out", "bad.svg"]) == 2
    assert run(["plot", "xi-critical", "--t", "oops", "--out", "bad.svg"]) == 2


def test_plot_product_convergence_is_non_increasing():
    assert run(
        [
            "plot", "product-convergence", "--n-zeros", "50",
            "--cache", "zeros_pc.csv", "--out", "pc.svg",
        ]
    ) == 0
    assert os.path.exists("pc.svg")


def test_report_command(capsys):
    assert run(["audit", "eq5", "--out", "reports"]) == 0
    capsys.readouterr()
    assert run(["report", "--out", "reports"]) == 0
    out = capsys.readouterr().out
    assert "norm-integral-ratio" in out
    # explicit path form
    assert run(["report", "reports/audit_eq5.json"]) == 0
    assert "norm-integral-ratio" in capsys.readouterr().out


def test_report_command_flags_failures(capsys):
    assert (
        run(
            [
                "audit", "coincidence", "--perturb", "0.01",
                "--n-zeros", "50", "--out", "rfail",
            ]
        )
        == 1
    )
    capsys.readouterr()
    assert run(["report", "--out", "rfail"]) == 1


def test_config_file_flow(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t-max = 30\ntol = 1e-8\n")
    assert run(["zeros", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3


def test_config_unknown_key_exit_code(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("speed = 11\n")
    assert run(["zeros", "--config", str(cfg)]) == 2


def test_zeros_out_file(capsys):
    assert run(["zeros", "--t-max", "30", "--out", "table.csv"]) == 0
    rows = open("table.csv").read().strip().splitlines()
    assert rows[0] == "n,gamma,abs_err"
    assert len(rows) == 4
