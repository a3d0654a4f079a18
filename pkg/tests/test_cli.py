import csv
import io
import json
import subprocess
import sys

import pytest

from charvar import cli
from charvar.charcount import CountRecord


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_count_untwisted_rank_one(capsys):
    code, out, _ = run(["count", "--kind", "untwisted", "--n", "1", "--g", "1", "--p", "5"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == 1
    assert doc["value"] == "16"


@pytest.mark.parametrize(
    "kind,value",
    [
        ("twisted", "96"),
        ("twisted-variety", "4"),
        ("twisted-stack", "2"),
        ("untwisted-stack", "8"),
        ("untwisted", "384"),
        ("surface-circle", "56"),
        ("additive-mu", {"num": "315", "den": "16"}),
    ],
)
def test_count_kinds(kind, value, capsys):
    code, out, _ = run(["count", "--kind", kind, "--n", "2", "--g", "1", "--p", "3"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == value


def test_mu_count(capsys):
    code, out, _ = run(["mu-count", "--n", "1", "--g", "2", "--p", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["value"] == {"num": "81", "den": "2"} and doc["raw"] == "81"


def test_verify_exp_numeric(capsys):
    code, out, _ = run(["verify-exp", "--g", "1", "--N", "2", "--mode", "numeric", "--p", "3"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["check"] == "exp-identity" and doc["pass"] is True
    assert len(doc["rows"]) == 2


def test_verify_exp_polynomial(capsys):
    code, out, _ = run(["verify-exp", "--g", "1", "--N", "1", "--primes", "3,5,7", "--holdout", "11"], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_eseries(capsys):
    code, out, _ = run(["eseries", "--side", "untwisted", "--g", "1", "--N", "1", "--primes", "3,5,7"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"][1]["text"] == "q - 1"
    code, out, _ = run(["eseries", "--side", "twisted", "--g", "2", "--N", "2", "--mode", "numeric", "--p", "3"], capsys)
    assert code == 0 and json.loads(out)["rows"][2]["value"]


def test_cuts_by_file_name(capsys):
    code, out, _ = run(["cuts", "--tiling", "hex-torus.json"], capsys)
    assert code == 0
    assert json.loads(out)["cuts"] == [["x"], ["y"], ["z"]]


def test_tiling_info(capsys):
    code, out, _ = run(["tiling-info", "--tiling", "genus2"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["genus"] == 2 and doc["shift"]["1"] == [2, 4, -2]
    assert doc["grading"]["a"] == {"num": "1", "den": "5"}


@pytest.mark.parametrize(
    "argv",
    [
        ["dimred-check", "--tiling", "hex-torus", "--cut", "z", "--dims", "2", "--p", "2"],
        ["dimred-check", "--tiling", "square-torus", "--dims", "1,1", "--p", "3"],
        ["morita-check", "--tiling", "hex-torus", "--n", "2", "--p", "3"],
        ["gtrue-check", "--tiling", "square-torus", "--n", "1", "--p", "2"],
    ],
)
def test_identity_checks_pass(argv, capsys):
    code, out, _ = run(argv, capsys)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True and doc["schema"] == 1


def test_identity_failure_exit_code(monkeypatch, capsys):
    from charvar import repscan

    monkeypatch.setattr(
        repscan, "untwisted_count", lambda n, g, F, workers=1: CountRecord(n, g, (F.p, F.k), "untwisted-solutions", 0)
    )
    code, out, _ = run(["morita-check", "--tiling", "hex-torus", "--n", "1", "--p", "3"], capsys)
    doc = json.loads(out)
    assert code == 2
    assert doc["pass"] is False and doc["lhs"] == "2" and doc["rhs"] == "0"


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--kind", "untwisted", "--n", "1", "--g", "1", "--p", "4"],
        ["count", "--kind", "bogus", "--n", "1", "--g", "1", "--p", "5"],
        ["count", "--kind", "untwisted", "--n", "0", "--g", "1", "--p", "5"],
        ["count", "--kind", "untwisted", "--n", "1", "--g", "1", "--p", "5", "--workers", "0"],
        ["count", "--kind", "twisted", "--n", "2", "--g", "1", "--p", "2"],
        ["verify-exp", "--g", "1", "--N", "2", "--mode", "numeric"],
        ["verify-exp", "--g", "1", "--N", "2", "--mode", "numeric", "--p", "7", "--primes", "x"],
        ["cuts", "--tiling", "no-such-tiling"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    _, err = capsys.readouterr()
    assert code == 1
    assert err


def test_max_iterations_fails_fast(capsys):
    code, _, err = run(
        ["count", "--kind", "untwisted", "--n", "2", "--g", "2", "--p", "5", "--max-iterations", "100"], capsys
    )
    assert code == 1 and "EnumerationTooLarge" in err
    code, _, err = run(["gtrue-check", "--tiling", "hex-torus", "--n", "2", "--p", "3", "--max-iterations", "50"], capsys)
    assert code == 1 and "EnumerationTooLarge" in err


def test_env_iteration_cap(monkeypatch, capsys):
    monkeypatch.setenv("CHARVAR_MAX_ITER", "10")
    code, _, err = run(["mu-count", "--n", "2", "--g", "1", "--p", "3"], capsys)
    assert code == 1 and "EnumerationTooLarge" in err


def test_csv_output(capsys):
    code, out, _ = run(["verify-exp", "--g", "1", "--N", "2", "--mode", "numeric", "--p", "3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert rows[0]["pass"] == "True"
    code, out, _ = run(["count", "--kind", "additive-mu", "--n", "1", "--g", "2", "--p", "3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "81/2"


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["cuts", "--tiling", "square-torus", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["cuts"] == [["a"], ["b"], ["c"], ["d"]]


def test_output_is_worker_independent(capsys):
    base = ["count", "--kind", "untwisted", "--n", "2", "--g", "2", "--p", "3"]
    outs = []
    for w in ("1", "2"):
        code, out, _ = run(base + ["--workers", w], capsys)
        outs.append(out)
    assert outs[0] == outs[1]


def test_no_floats_in_reports(capsys):
    code, out, _ = run(["verify-exp", "--g", "2", "--N", "2", "--mode", "numeric", "--p", "3"], capsys)

    def walk(v):
        if isinstance(v, float):
            raise AssertionError(f"float in report: {v}")
        if isinstance(v, dict):
            for x in v.values():
                walk(x)
        if isinstance(v, list):
            for x in v:
                walk(x)

    walk(json.loads(out))


def test_audit_subset(capsys):
    code, out, err = run(["audit", "--criteria", "7,8"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    assert [r["criterion"] for r in doc["rows"]] == [7, 8]
    assert "[PASS] criterion  7" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "charvar.cli", "count", "--kind", "untwisted", "--n", "1", "--g", "1", "--p", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == "16"


def test_max_iterations_holds_with_warm_cache(capsys):
    base = ["count", "--kind", "untwisted", "--n", "2", "--g", "2", "--p", "5"]
    code, _, _ = run(base, capsys)
    assert code == 0
    code, _, err = run(base + ["--max-iterations", "100"], capsys)
    assert code == 1 and "EnumerationTooLarge" in err
