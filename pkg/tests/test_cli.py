import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import instances
from popbranch.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_USAGE, UsageError, main, parse_args
from popbranch.instance import serialize_instance

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"
sys.path.insert(0, str(ROOT / "scripts"))
from freeze_golden import CASES, run  # noqa: E402


def test_parse_args():
    cmd = parse_args(["solve", "-i", "g.json"])
    assert cmd.name == "solve" and cmd.args.input == "g.json"
    cmd = parse_args(["gen", "tight-factor", "--k", "3", "-o", "g8.json"])
    assert (cmd.name, cmd.args.family, cmd.args.k, cmd.args.output) == ("gen", "tight-factor", 3, "g8.json")
    with pytest.raises(UsageError):
        parse_args(["solve", "--bogus"])
    with pytest.raises(UsageError):
        parse_args(["solve", "--budget", "0"])


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out = run(CASES[name])
    assert out == (DATA / "golden" / f"{name}.out").read_text()
    assert code == int((DATA / "golden" / f"{name}.code").read_text())


def test_solve_four_cycle():
    code, out = run(["solve", "-i", "four_cycle.json"])
    assert code == EXIT_NO and json.loads(out) == {"popular": False}


def test_solve_star():
    code, out = run(["solve", "-i", "star.json"])
    doc = json.loads(out)
    assert code == EXIT_OK and doc["branching"] == ["ab", "ac"] and doc["certificate"]


def test_minmargin_four_cycle():
    code, out = run(["minmargin", "-i", "four_cycle.json"])
    assert code == EXIT_OK and json.loads(out)["margin"] == 1


def test_verify_not_popular():
    code, out = run(["verify", "-i", "four_cycle.json", "--branching", '["ab", "ac", "cd"]'])
    assert code == EXIT_NO and json.loads(out)["margin"] == 1


def test_exit_codes(tmp_path, capsys):
    assert main(["solve", "--bogus"]) == EXIT_USAGE
    assert main(["solve", "-i", str(tmp_path / "missing.json")]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": ["a"], "edges": [{"id": "e", "tail": "z", "head": "a"}]}')
    assert main(["solve", "-i", str(bad)]) == EXIT_INPUT
    assert main(["verify", "-i", str(DATA / "star.json"), "--branching", '["zz"]']) == EXIT_INPUT
    assert main(["oracle", "-i", str(DATA / "four_cycle.json"), "--budget", "10"]) == EXIT_BUDGET
    assert main(["emit-lp", "-i", str(DATA / "g3.json"), "--cutoff", "4"]) == EXIT_BUDGET
    assert main(["gen", "random", "--n", "3"]) == EXIT_USAGE
    assert main(["gen", "random", "--n", "3", "--m", "9"]) == EXIT_INPUT
    assert main(["minmargin", "-i", str(DATA / "toy3dm.json")]) == EXIT_INPUT
    assert main(["reduce", "3sat", "-i", str(DATA / "phi.cnf"), "--assignment=-1,-2"]) == EXIT_INPUT
    assert capsys.readouterr().out == ""  # failures print nothing on stdout


def test_output_file(tmp_path):
    out = tmp_path / "g.json"
    assert main(["gen", "random", "--n", "6", "--m", "12", "--model", "weak:2", "--seed", "42", "-o", str(out)]) == 0
    from popbranch.instance import parse_instance

    assert serialize_instance(parse_instance(out.read_text())) == (DATA / "weak_6_12_seed42.json").read_text()


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO((DATA / "star.json").read_text()))
    assert main(["solve"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["popular"] is True


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "popbranch", "solve", "-i", str(DATA / "four_cycle.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1 and proc.stdout == '{"popular": false}\n'


def test_errors_go_to_stderr(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "popbranch", "solve", "-i", str(tmp_path / "missing.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_INPUT and proc.stdout == ""
    assert "cannot read" in proc.stderr


def test_log_level_env(tmp_path):
    env = {"POPBRANCH_LOG": "debug", "PATH": ""}
    proc = subprocess.run(
        [sys.executable, "-m", "popbranch", "mixed", "-i", str(DATA / "four_cycle.json")],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0 and "DEBUG" in proc.stderr
    assert json.loads(proc.stdout)["mixed"]


@settings(max_examples=40)
@given(instances(max_n=6))
def test_verify_after_solve(inst):
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "g.json"
        path.write_text(serialize_instance(inst))
        sol = Path(d) / "sol.json"
        code = main(["solve", "-i", str(path), "-o", str(sol)])
        if code == EXIT_OK:
            assert main(["verify", "-i", str(path), "--branching", str(sol)]) == EXIT_OK
        else:
            assert code == EXIT_NO
