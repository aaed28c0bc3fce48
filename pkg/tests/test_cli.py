import json
import subprocess
import sys
from pathlib import Path

import pytest

from liftcalc.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main

DATA = Path(__file__).resolve().parent / "data"
R3 = Path(__file__).resolve().parent.parent / "models" / "r3_contact.def"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name, code", [("all_pass", EXIT_PASS), ("one_fail", EXIT_FAIL), ("malformed", EXIT_INPUT)])
def test_golden_exit_codes(capsys, name, code):
    got, _, _ = run(capsys, "check", DATA / f"{name}.def")
    assert got == code


@pytest.mark.parametrize("name", ["all_pass", "one_fail"])
def test_golden_json_reports(capsys, name):
    _, out, _ = run(capsys, "check", DATA / f"{name}.def", "--format", "json")
    assert out == (DATA / f"{name}.expected.json").read_text()


def test_json_is_byte_identical_across_runs(capsys):
    _, a, _ = run(capsys, "check", R3, "--format", "json", "--builtin-suite", "--seed", "42")
    _, b, _ = run(capsys, "check", R3, "--format", "json", "--builtin-suite", "--seed", "42")
    assert a == b
    rows = [json.loads(line) for line in a.splitlines()]
    assert rows[0]["header"]["seed"] == 42
    assert rows[-1]["summary"]["overall"] is True


def test_malformed_file_reports_location(capsys):
    _, _, err = run(capsys, "check", DATA / "malformed.def")
    assert "line 7" in err and "chart needs 3" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", DATA / "no_such_file.def")
    assert code == EXIT_INPUT and err.startswith("error:")


def test_bad_options(capsys):
    assert run(capsys, "check", R3, "--samples", "0")[0] == EXIT_INPUT


def test_failing_check_names_the_condition(capsys):
    _, out, _ = run(capsys, "check", DATA / "one_fail.def")
    assert "FAIL  vertical_x" in out and "£_X U ≠ 0" in out
    assert out.rstrip().endswith("overall: FAIL")


def test_lift_command(capsys):
    code, out, _ = run(capsys, "lift", R3, "--object", "U", "--complete", "1", "--vertical", "1")
    assert code == EXIT_PASS
    assert "d3@1: 1" in out and "order 2" in out


def test_lift_unknown_object(capsys):
    assert run(capsys, "lift", R3, "--object", "Z", "--complete", "1")[0] == EXIT_INPUT


def test_nijenhuis_command(capsys):
    code, out, _ = run(capsys, "nijenhuis", R3, "--tensor", "F", "--complete", "1")
    assert code == EXIT_PASS and "integrable: yes" in out


def test_nijenhuis_non_integrable(tmp_path, capsys):
    p = tmp_path / "exp.def"
    p.write_text('[manifold]\ndim = 4\n[endomorphism F]\n'
                 'matrix = ["0,-1,0,0", "1,0,0,0", "0,0,0,-exp(-x1)", "0,0,exp(x1),0"]\n')
    code, out, _ = run(capsys, "nijenhuis", p, "--tensor", "F")
    assert code == EXIT_FAIL
    assert "N(d1@0, d3@0) d3@0: 1" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "liftcalc.cli", "check", str(DATA / "all_pass.def")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "overall: PASS" in proc.stdout
