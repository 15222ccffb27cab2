import io
import json
import subprocess
import sys

import pytest

from bigbracket.cli import main
from test_fileformat import BASIC


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_from_stdin(capsys, monkeypatch):
    code, out, _ = run(["check", "-", "--max-k", "2", "--max-n", "2"], capsys, BASIC, monkeypatch)
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["failed"] == 0 and rep["summary"]["total"] == len(rep["tasks"])
    assert rep["tasks"][0]["id"] == "T-01" and rep["tasks"][0]["params"] == {"k": 2}


def test_check_file_text_format(tmp_path, capsys):
    f = tmp_path / "heis.bb"
    f.write_text(BASIC.replace("task all\n", ""))
    code, out, _ = run(["check", str(f), "--format", "text"], capsys)
    assert code == 0 and "T-01" in out and "passed" in out


def test_parse_error_exit_code(capsys, monkeypatch):
    code, _, err = run(["check", "-"], capsys, "name a\nsignature 0 2\nfrob\n", monkeypatch)
    assert code == 2 and "line 3" in err


def test_unknown_example_exit_code(capsys):
    code, _, err = run(["classify", "--example", "nope"], capsys)
    assert code == 2


def test_strict_mode(capsys):
    code, out, _ = run(["check", "--example", "maurer-cartan-2d", "--max-k", "1", "--max-n", "1"], capsys)
    assert code == 0 and json.loads(out)["summary"]["not-applicable"] > 0
    code, _, _ = run(["check", "--example", "maurer-cartan-2d", "--max-k", "1", "--max-n", "1", "--strict"], capsys)
    assert code == 3


def test_not_applicable_itemized(capsys):
    code, out, _ = run(["verify-all", "--only", "heisenberg-central", "--max-k", "1", "--max-n", "1"], capsys)
    rep = json.loads(out)
    na = [t for t in rep["tasks"] if t["status"] == "not-applicable"]
    assert len(rep["not_applicable"]) == len(na)
    assert all(" heisenberg-central: hypothesis not met: " in item for item in rep["not_applicable"])


def test_classify(capsys):
    code, out, _ = run(["classify", "--example", "pn-affine-3d"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pair_class"] == "Poisson-Nijenhuis"
    code, out, _ = run(["classify", "--example", "pn-affine-3d", "--I", "Jpi", "--J", "IN"], capsys)
    assert json.loads(out)["pair_class"] != "Poisson-Nijenhuis"


def test_hierarchy(capsys):
    code, out, _ = run(["hierarchy", "--example", "pn-affine-3d", "--n-max", "2", "--k-max", "2"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "passed" and len(rep["entries"]) == 3
    assert all(rep["compatible"].values())


def test_examples_listing_and_dump(capsys):
    code, out, _ = run(["examples"], capsys)
    assert code == 0 and "hypercomplex-u2" in out
    code, out, _ = run(["examples", "--dump", "heisenberg-central"], capsys)
    assert out.startswith("name heisenberg-central\n")


def test_json_identical_across_jobs(capsys):
    args = ["verify-all", "--only", "pn-affine-3d", "heisenberg-central", "--max-k", "1", "--max-n", "2"]
    _, one, _ = run(args + ["--jobs", "1"], capsys)
    _, two, _ = run(args + ["--jobs", "2"], capsys)
    _, again, _ = run(args + ["--jobs", "1"], capsys)
    assert one == two == again


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "bigbracket", "examples"], capture_output=True, text=True, check=True)
    assert "pn-affine-3d" in out.stdout
