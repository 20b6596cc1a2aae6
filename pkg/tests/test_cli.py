import json
import subprocess
import sys

import pytest

from rhh.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_json(capsys):
    code, out, _ = run(["enumerate", "--n", "7"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    pairs = [(e.get("r"), tuple(e.get("ss", ()))) for e in doc["entries"] if not e.get("so_n")]
    assert pairs == [(0, ()), (1, ()), (2, ()), (0, ("su2",)), (1, ("su2",)), (0, ("su2", "su2"))]


def test_enumerate_text(capsys):
    code, out, _ = run(["enumerate", "--n", "3", "--format", "text"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "admissible holonomy algebras on RH(3):",
        "  r=0 ss=-  dim 0  3r+dim k_ss = 0 <= 2",
        "  so(3)  dim 3",
    ]


@pytest.mark.parametrize("argv,label", [
    (["build", "--n", "3"], [1]),
    (["build", "--n", "4", "--ss", "su2"], [1, 3]),
    (["build", "--spec", "n=7 r=1 ss=su2 phi=canonical A1=zero phiA=zero seed=42"], [1, 2, 3]),
    (["build", "--n", "5", "--hol", "so_n"], []),
])
def test_build_labels(argv, label, capsys):
    code, out, _ = run(argv, capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["type"]["label"] == label
    assert doc["verification"]["passed"]


def test_classify_and_verify_parts(capsys):
    _, out, _ = run(["classify", "--n", "4", "--r", "1"], capsys)
    doc = json.loads(out)
    assert "verification" not in doc and doc["holonomy"]["dim"] == 1
    _, out, _ = run(["verify", "--n", "4", "--r", "1", "--format", "text"], capsys)
    assert "verify    pass" in out


@pytest.mark.parametrize("argv", [
    ["build", "--n", "3", "--r", "1"],
    ["build", "--spec", "n=4 bogus=1"],
    ["build", "--spec", "n=4 ss=e8"],
    ["build"],
    ["build", "--n", "40"],
    ["enumerate", "--n", "1"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("rhh: error:")


def test_bad_env_tol(monkeypatch, capsys):
    monkeypatch.setenv("RHH_TOL", "tiny")
    code, _, _ = run(["build", "--n", "3"], capsys)
    assert code == 2


def test_env_tol_reaches_report(monkeypatch, capsys):
    monkeypatch.setenv("RHH_TOL", "1e-7")
    _, out, _ = run(["verify", "--n", "3"], capsys)
    assert set(json.loads(out)["verification"]["thresholds"].values()) == {1e-7}


def test_verification_failure_exit_1(capsys):
    # float round-off cannot meet this tolerance
    spec = "n=7 r=1 ss=su2 phi=random A1=random phiA=random seed=3"
    code, _, err = run(["verify", "--spec", spec, "--tol", "1e-30"], capsys)
    assert code == 1
    assert "verification failed" in err


def test_nonpositive_tol_is_usage_error(capsys):
    code, _, _ = run(["verify", "--n", "4", "--tol", "-1"], capsys)
    assert code == 2


def test_suite_rh3_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["suite", "--n-max", "3", "--seed", "7", "--out", str(a)]) == 0
    assert main(["suite", "--n-max", "3", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["structures"] == ["n=3 r=0 ss=none", "n=3 so_n"]
    assert doc["passed"] and not doc["failures"]


def test_suite_text(capsys):
    code, out, _ = run(["suite", "--n-max", "4", "--format", "text"], capsys)
    assert code == 0
    assert out.rstrip().endswith("0 failures")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rhh.cli", "enumerate", "--n", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 4
