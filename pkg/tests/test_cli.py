import csv
import io
import json
import subprocess
import sys

import pytest

from sharptrace.cli.main import main
from sharptrace.cli.report import Check, Report, render_report
from sharptrace.cli.suites import PAPER_REFS, SuiteConfig, resolve_workers, run_suite


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_specfun_json(capsys):
    code, out, _ = run(["verify", "specfun", "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["summary"]["fail"] == 0 and "timestamp" in d
    assert all(c["paper_ref"] in PAPER_REFS for c in d["checks"])


def test_no_timestamp_is_byte_stable(capsys):
    argv = ["verify", "halfspace", "--n-max", "5", "--format", "json", "--no-timestamp"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv + ["--workers", "2"], capsys)
    assert a == b
    assert "timestamp" not in json.loads(a)


def test_flagged_checks_do_not_fail(capsys):
    code, out, _ = run(["verify", "ball", "--n-min", "5", "--n-max", "5", "--mode", "exact", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    statuses = {r["status"] for r in rows}
    assert code == 0 and "flagged" in statuses and "fail" not in statuses
    exact = [r for r in rows if r["paper_ref"] == "ball.polyharmonic"]
    assert exact and all(r["residual"] == "0" for r in exact)


def test_failing_check_sets_exit_code(monkeypatch, capsys):
    import sharptrace.cli.main as cli

    bad = Report("x", "0", {}, [Check("broken", "ball.polyharmonic", "fail", 1, 0)])
    monkeypatch.setattr(cli, "run_suite", lambda cfg, ts: bad)
    code, out, _ = run(["verify", "specfun"], capsys)
    assert code == 1 and "[FAIL" in out


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(["verify", "ball", "--n-min", "3", "--n-max", "4", "--m-min", "2"], capsys)[0] == 2
    assert run(["verify", "nope"], capsys)[0] == 2
    assert run(["ineq", "trace", "--n", "3", "--m", "1"], capsys)[0] == 2
    assert run(["ineq", "lebedev-milin", "--n", "4"], capsys)[0] == 2
    assert run(["metric", "--n", "5", "--gamma", "abc"], capsys)[0] == 2
    assert run(["verify", "specfun", "-o", str(tmp_path / "missing" / "x.json")], capsys)[0] == 2


def test_output_file(capsys, tmp_path):
    path = tmp_path / "r.csv"
    assert run(["verify", "specfun", "--format", "csv", "-o", str(path)], capsys)[0] == 0
    assert path.read_text().splitlines()[0] == "name,paper_ref,status,residual,tolerance,runtime_ms,details"


def test_metric_csv(capsys):
    code, out, _ = run(["metric", "--n", "7", "--gamma", "3/2", "--samples", "2"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "ρ,psi_gamma,conformal_factor"
    rho, psi, _ = map(float, lines[-1].split(","))
    assert psi == pytest.approx(1 + 2 * rho)
    _, out, _ = run(["metric", "--n", "3", "--gamma", "3/2", "--samples", "1"], capsys)
    assert out.splitlines()[1].split(",")[1] == "1.0"


def test_ineq_commands(capsys):
    code, out, _ = run(["ineq", "trace", "--n", "5", "--m", "1", "--x0", "0.3"], capsys)
    d = json.loads(out)
    assert code == 0 and d["ratio"] == pytest.approx(1, abs=1e-9)
    code, out, _ = run(["ineq", "lebedev-milin", "--n", "3", "--datum", "const", "--format", "csv"], capsys)
    assert code == 0 and "lhs,0.0" in out
    code, out, _ = run(["ineq", "halfspace", "--n", "7", "--m", "2", "--format", "text"], capsys)
    assert code == 0 and out.startswith("kind")


def test_workers_precedence(monkeypatch):
    monkeypatch.setenv("SHARPTRACE_WORKERS", "3")
    assert resolve_workers(None) == 3
    assert resolve_workers(2) == 2
    monkeypatch.delenv("SHARPTRACE_WORKERS")
    assert resolve_workers(None) >= 1


def test_report_text_rendering():
    rep = run_suite(SuiteConfig(suite="specfun"))
    text = render_report(rep, "text")
    assert text.strip().endswith("4 pass, 0 fail, 0 flagged")


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "sharptrace.cli.main", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("sharptrace ")
