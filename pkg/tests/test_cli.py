import json
import subprocess
import sys

import pytest

from realsnum.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_snumber_text_and_json(capsys):
    assert call(capsys, "snumber", "--type", "2,2;2,1,1") == (0, "0\n", "")
    code, out, _ = call(capsys, "--format", "json", "--type", "2,2;2,1,1", "snumber")
    assert code == 0
    assert json.loads(out) == {"type": "2,2;2,1,1", "degree": 4, "s": 0}


def test_options_before_and_after_subcommand_agree(capsys):
    a = call(capsys, "--mode", "explicit", "--simple", "5", "snumber")
    b = call(capsys, "snumber", "--mode", "explicit", "--simple", "5")
    assert a == b and a[1] == "16\n"


def test_invalid_type_list_exits_one(capsys):
    code, _, err = call(capsys, "snumber", "--type", "3,1;2,2")
    assert code == 1 and "expected 3" in err


def test_bad_usage_exits_two(capsys):
    code, _, _ = call(capsys, "snumber", "--mode", "fast")
    assert code == 2


def test_dessins_sign(capsys):
    code, out, _ = call(capsys, "dessins", "sign", "--type", "2,2;2,1,1")
    assert code == 0 and out.splitlines()[-1] == "s = 0"


def test_invariance(capsys):
    code, out, _ = call(capsys, "invariance", "--type", "2,2;2,1,1")
    assert out.strip() == "invariant: true; s = 0; per-order raw counts: [2, 0]"
    code, out, _ = call(capsys, "invariance", "--random", "5", "--seed", "3", "--max-degree", "6")
    assert code == 0 and out.splitlines()[-1] == "all invariant: true"


def test_trees(capsys):
    code, out, _ = call(capsys, "trees", "sum", "--black", "4,2,2", "--white", "2,2,1,1,1,1")
    assert out.split() == ["white", "side:", "2", "black", "side:", "2"]
    code, out, _ = call(capsys, "trees", "enumerate", "--black", "1", "--white", "1")
    assert out.splitlines()[-1] == "total: 2"


def test_series(capsys):
    code, out, _ = call(capsys, "series", "coeff", "--reduced", "", "--parity", "odd", "--upto", "6")
    assert out.strip() == "1, 0, -1, 0, 5, 0, -61"
    code, out, _ = call(capsys, "series", "fit", "--reduced", "2", "--parity", "odd", "--upto", "6")
    assert code == 0 and out.startswith("F = g")
    code, out, _ = call(capsys, "series", "leading", "--reduced", "2,2", "--parity", "odd")
    assert out.strip() == "g * q^1 f^1: -1/2"
    code, _, err = call(capsys, "series", "fit", "--reduced", "1,1", "--parity", "odd", "--upto", "6")
    assert code == 1 and "inconsistent fit" in err


def test_vanishing(capsys):
    code, out, _ = call(capsys, "series", "vanishing", "--reduced", "2", "--parity", "even",
                        "--upto", "7")
    assert "nonvanishing predicate: false" in out and "consistent: true" in out


def test_asymptotics(capsys):
    code, out, _ = call(capsys, "series", "asymptotics", "--parity", "odd", "--series", "f",
                        "--m-max", "21")
    assert code == 0 and "m=21" in out


def test_jobs_output_identical(capsys):
    args = ["series", "coeff", "--reduced", "1", "--parity", "odd", "--upto", "7"]
    one = call(capsys, *args, "--jobs", "1")
    two = call(capsys, *args, "--jobs", "2")
    assert one == two


def test_cache_round_trip(tmp_path, capsys):
    path = tmp_path / "s.jsonl"
    args = ["snumber", "--simple", "6", "--cache", str(path)]
    first = call(capsys, *args)
    assert path.read_text().count("\n") == 1
    assert call(capsys, *args) == first
    assert path.read_text().count("\n") == 1


def test_oracle_commands(capsys):
    code, out, _ = call(capsys, "oracle", "euler", "--upto", "5")
    assert out.strip() == "1, 1, 1, 2, 5, 16"
    code, out, _ = call(capsys, "oracle", "dessins", "--type", "2,2;2,1,1")
    assert out.splitlines()[-1] == "total: 2"
    code, _, err = call(capsys, "oracle", "dessins", "--simple", "6")
    assert code == 1 and "cap" in err


def test_export_dot(tmp_path, capsys):
    out_file = tmp_path / "d.dot"
    code, _, _ = call(capsys, "export", "dot", "--type", "2,2;2,1,1", "--out", str(out_file))
    assert code == 0 and out_file.read_text().startswith("digraph")
    code, out, _ = call(capsys, "export", "dot", "--black", "2", "--white", "1,1", "--disorders")
    assert out.startswith("graph")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "realsnum", "snumber", "--simple", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "5"
