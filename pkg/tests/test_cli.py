import json
import subprocess
import sys

import pytest

from fracspace import __version__
from fracspace.cli import main


def _csv_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return header, [[float(v) for v in ln.split(",")] for ln in lines[1:]]


def test_csv_header_records_version_and_config(capsys):
    assert main(["specfun", "eval", "--fn", "bessel_j", "--order", "0.25", "--x", "1,2"]) == 0
    out = capsys.readouterr().out
    first, second = out.splitlines()[:2]
    assert first == f"# fracspace {__version__}"
    cfg = json.loads(second.removeprefix("# config: "))
    assert cfg["order"] == 0.25 and cfg["seed"] == 0
    header, rows = _csv_rows(out)
    assert header == ["input", "output"]
    assert rows[0][1] == pytest.approx(0.75223133334079006, rel=1e-12)


def test_output_is_deterministic(capsys):
    argv = ["kernel", "eval", "--variant", "bilateral_e", "--n", "1", "--alpha", "0.75", "--x=-1,0.5,2"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == a


def test_json_output_to_file(tmp_path):
    out = tmp_path / "dsi.json"
    assert main(["measure", "dsi-check", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["_header"]["version"] == __version__
    assert doc["pass"] is True and doc["check"] == "dsi"


def test_figure1_csv(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["kernel", "figure1", "--alpha", "0.5", "--out", str(out)]) == 0
    header, rows = _csv_rows(out.read_text())
    assert header == ["x", "c_alpha", "s_alpha", "c_1", "s_1"]
    assert len(rows) == 601


def test_transform_run(capsys):
    assert main(["transform", "run", "--alpha", "0.75", "--l", "0.3", "--kgrid", "log:0.5:2:2"]) == 0
    _, rows = _csv_rows(capsys.readouterr().out)
    assert rows[0][1] == pytest.approx(0.44225851072802685, rel=1e-9)
    assert rows[1][1] == pytest.approx(0.58931897682589792, rel=1e-9)


def test_transform_run_from_csv(tmp_path, capsys):
    import numpy as np

    x = np.linspace(0.01, 8.0, 800)
    src = tmp_path / "g.csv"
    src.write_text("x,value\n" + "\n".join(f"{float(a)!r},{float(np.exp(-a * a / 2))!r}" for a in x) + "\n")
    assert main(["transform", "run", "--alpha", "1", "--variant", "cos", "--input", str(src),
                 "--kgrid", "lin:0.5:1:2", "--rel-tol", "1e-6"]) == 0
    _, rows = _csv_rows(capsys.readouterr().out)
    assert rows[0][1] == pytest.approx(np.exp(-0.125), rel=1e-4)


@pytest.mark.parametrize("argv, code", [
    (["transform", "check", "--variant", "bilateral_e", "--n", "1", "--alpha", "0.75",
      "--function", "powergaussian:1,1"], 0),
    (["operators", "check", "--which", "factor", "--l", "0.7"], 1),
    (["operators", "check", "--which", "ladder"], 0),
    (["crosscheck", "condition", "--l", "0.5"], 1),
    (["crosscheck", "crossterm"], 0),
    (["crosscheck", "crossterm", "--x", "1", "--x-prime", "2"], 1),
    (["crosscheck", "kasner", "--couplings", "0.5,0.5"], 1),
    (["crosscheck", "lattice", "--k", "2.718281828459045"], 0),
    (["crosscheck", "parity", "--n", "2"], 0),
    (["measure", "dims"], 0),
    (["kernel", "norm", "--n", "2"], 0),
])
def test_check_exit_codes(argv, code, capsys):
    assert main(argv) == code
    doc = json.loads(capsys.readouterr().out)
    assert "_header" in doc


@pytest.mark.parametrize("argv", [
    ["kernel", "eval", "--variant", "nope"],
    ["kernel", "eval", "--variant", "bilateral", "--l", "0.3"],
    ["measure", "eval", "--alpha", "-1", "--x", "1"],
    ["transform", "run", "--kgrid", "cubic:0:1:3"],
    ["transform", "run", "--function", "nosuch"],
    ["suite", "--criteria", "99"],
    ["crosscheck", "lattice", "--omega", "3.0"],
    ["no-such-command"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_nonconvergence_exits_3(capsys):
    with pytest.warns(RuntimeWarning):
        code = main(["transform", "run", "--alpha", "0.75", "--l", "0.3", "--kgrid", "log:0.1:10:3",
                     "--rel-tol", "1e-17", "--abs-tol", "1e-300"])
    assert code == 3
    assert "not converged" in capsys.readouterr().err


def test_suite_selected_criteria(tmp_path, capsys):
    out = tmp_path / "suite.json"
    assert main(["suite", "--quick", "--criteria", "9,11", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "criterion  9 PASS" in text and "criterion 11 PASS" in text
    doc = json.loads(out.read_text())
    assert doc["pass"] and [c["criterion"] for c in doc["criteria"]] == [9, 11]


def test_suite_reports_failing_criterion(capsys):
    assert main(["suite", "--quick", "--criteria", "10"]) == 1
    assert "criterion 10 FAIL" in capsys.readouterr().out


def test_console_entry_point_and_module():
    r = subprocess.run([sys.executable, "-m", "fracspace", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and __version__ in r.stdout
