import json
import subprocess
import sys

import pytest

from kblowup.cli import EXIT_CACHE, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_wallcross_example(capsys):
    code, out, _ = run(capsys, "wallcross-example", "--rank", "2", "--nf", "0")
    assert code == EXIT_OK and out.strip() == "-2"


def test_machine_series_records(capsys):
    code, out, _ = run(capsys, "z", "--rank", "1", "--max-order", "2", "--format", "machine")
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert code == EXIT_OK
    assert [r[0] for r in rows] == ["0", "2"] and all(len(r) == 4 for r in rows)


def test_check_blowup_holds(capsys):
    code, out, _ = run(capsys, "check", "blowup", "--rank", "2", "--cs", "0", "-d", "1", "--max-order", "4")
    assert code == EXIT_OK
    assert out.startswith("blowup_eq(") and "holds" in out.splitlines()[0]


def test_identity_failure_exit_code(capsys):
    code, out, _ = run(capsys, "check", "vanish-k", "--rank", "2", "--cs", "1", "-d", "1", "-k", "-1",
                       "--max-order", "2", "--format", "machine")
    assert code == EXIT_FAIL
    assert json.loads(out)["holds"] is False


@pytest.mark.parametrize("argv", [
    ["z", "--rank", "0"],
    ["check", "blowup", "--rank", "2", "--cs", "3"],
    ["f0-tau", "--rank", "2"],
    ["solve", "--rank", "2", "--pair", "0", "2", "--max-order", "4"],
    ["z", "--convention", "tau=other"],
    ["check", "vanish-t", "--rank", "2", "-d", "2", "-p", "1"],
    ["nonsense"],
])
def test_config_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_CONFIG


def test_cache_error_exit_code(capsys, tmp_path):
    argv = ["zhat", "--rank", "1", "--max-order", "2", "--cache", str(tmp_path), "--format", "machine"]
    code, first, _ = run(capsys, *argv)
    assert code == EXIT_OK
    code, again, _ = run(capsys, *argv)
    assert again == first
    (f,) = tmp_path.glob("*.json")
    data = json.loads(f.read_text())
    data["digest"] = "0" * 64
    f.write_text(json.dumps(data))
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CACHE and "digest" in err


def test_limits_and_sw_coefficients(capsys):
    code, out, _ = run(capsys, "f0-tau", "--rank", "2", "-p", "1", "--max-order", "4", "--direction", "3")
    assert code == EXIT_OK and len(out.strip().splitlines()) == 2
    code, out, _ = run(capsys, "sw-up", "--rank", "3", "-p", "2", "--max-order", "0", "--format", "machine")
    assert code == EXIT_OK and out.startswith("U[2]\t0\t")


def test_console_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "kblowup", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("kblowup ")
