import csv
import io
import json
import subprocess
import sys

import pytest

from fivequbit import verify
from fivequbit.cli import RunConfig, main, run


def test_verify_passes_and_lists_suites():
    status, report, diag = run(RunConfig("verify", trials=20, seed=0))
    assert status == 0 and diag == ""
    lines = report.splitlines()
    names = ["round_trip", "single_error_correction", "gram_identity", "balance",
             "env_decomposition", "general_interaction"]
    for name in names:
        assert any(line.startswith(f"PASS {name}:") for line in lines)
    assert lines[-1] == "ALL PASS"


def test_verify_deterministic():
    a = run(RunConfig("verify", trials=10, seed=5))[1]
    b = run(RunConfig("verify", trials=10, seed=5))[1]
    assert a == b


def test_verify_failure_exit_code(monkeypatch):
    def broken(rng, trials):
        return verify.SuiteResult("round_trip", False, "forced")

    monkeypatch.setattr(verify, "SUITES", [broken] + verify.SUITES[1:])
    status, report, diag = run(RunConfig("verify", trials=2))
    assert status == 1
    assert "round_trip" in diag
    assert report.splitlines()[-1] == "FAILED: round_trip"


def test_verify_json():
    payload = json.loads(run(RunConfig("verify", trials=3, format="json"))[1])
    assert all(s["passed"] for s in payload["suites"])


def test_table_text():
    report = run(RunConfig("table"))[1]
    lines = report.splitlines()
    assert len(lines) == 16
    assert "BS3 1101 −α|1⟩+β|0⟩" in lines
    assert "S1 1000 −α|0⟩−β|1⟩" in lines


def test_table_csv_and_json():
    rows = list(csv.DictReader(io.StringIO(run(RunConfig("table", format="csv"))[1])))
    assert len(rows) == 16 and rows[1]["transform"] == "iY"
    payload = json.loads(run(RunConfig("table", format="json"))[1])
    assert len(payload["rows"]) == 16


def test_bound_text():
    report = run(RunConfig("bound"))[1]
    assert "n=5 32 32 feasible(saturates)" in report.splitlines()
    assert "n=4 26 16 infeasible" in report.splitlines()


def test_fidelity_csv_header_and_summary():
    status, report, diag = run(RunConfig("fidelity", format="csv", theta_grid=(0.01, 0.02, 0.04)))
    assert status == 0
    assert report.splitlines()[0] == "theta,p,f_unencoded,f_corrected"
    assert "slope_corrected=" in diag


def test_fidelity_text_reports_fit():
    report = run(RunConfig("fidelity"))[1]
    assert "slope_corrected=" in report and "c=" in report and "p_star=" in report


def test_search_text():
    report = run(RunConfig("search"))[1]
    assert "reference" in report
    assert all("negatives=2,4" in l or "negatives=4,2" in l for l in report.splitlines()[3:])


def test_out_path(tmp_path, capsys):
    out = tmp_path / "table.txt"
    assert main(["table", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert len(out.read_text(encoding="utf-8").splitlines()) == 16


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["verify", "--trials", "0"],
        ["fidelity", "--theta-grid", "0.3,0.1"],
        ["fidelity", "--theta-grid", "abc"],
        ["table", "--format", "xml"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("fidelity", theta_grid=())
    with pytest.raises(ValueError):
        RunConfig("verify", trials=0)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fivequbit", "bound", "--max-n", "5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-2] == "n=5 32 32 feasible(saturates)"
