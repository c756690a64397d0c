import json
import subprocess
import sys

import pytest

from conftest import CORPUS
from opetopic.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_corpus(capsys):
    code, out, err = run(capsys, "check", CORPUS)
    assert code == 0 and not err
    assert out.count(".drv:") == len(list(CORPUS.glob("*.drv")))


def test_check_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "check", CORPUS)
    _, parallel, _ = run(capsys, "check", "--jobs", 3, CORPUS)
    assert serial == parallel


def test_check_rule_violation(capsys, tmp_path):
    f = tmp_path / "bad.drv"
    f.write_text("#dialect opt!\nlet f = shift(point(a), f)\nshift(f, f)\n")
    code, out, err = run(capsys, "check", f)
    assert code == 1 and "3:1" in err and not out


def test_check_parse_error(capsys, tmp_path):
    f = tmp_path / "bad.drv"
    f.write_text("#dialect opt?\nshift(point\n")
    code, _, err = run(capsys, "check", f)
    assert code == 2 and "parse error" in err


@pytest.mark.parametrize("name", ["not_an_opetope_gap", "not_an_opetope_rootless"])
def test_decide_non_examples(capsys, name):
    code, out, _ = run(capsys, "decide", "--explain", CORPUS / f"{name}.popt")
    assert code == 1 and out.splitlines()[0] == "false"


def test_decide_literal(capsys):
    code, out, _ = run(capsys, "decide", "{ []:1 <- arrow; [*] <- arrow }")
    assert code == 0 and out.strip() == "true"


def test_decide_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "decide", CORPUS / "not_an_opetope_rootless.popt")
    assert json.loads(out) == {"opetope": False, "reason": "no root node []:2"}


@pytest.mark.parametrize("n", range(8))
def test_count_integers(capsys, n):
    lit = "{ " + "; ".join(f"[{'*' * k}]{':1' if k == 0 else ''} <- arrow" for k in range(n)) + " }" if n else "degen{point}"
    code, out, _ = run(capsys, "count", "--oracle", lit)
    assert code == 0
    assert out.splitlines()[0] == str(2 * n + 3)
    assert "agree" in out


def test_target_table(capsys):
    code, out, _ = run(capsys, "target", CORPUS / "classic_shape.popt")
    assert code == 0
    assert out.splitlines()[1:] == ["[[]]:2 -> []:1", "[[*][]] -> [*]", "[[*][*]] -> [**]"]


def test_convert_both_ways(capsys):
    code, out, _ = run(capsys, "convert", "--to", "named", "--verify", CORPUS / "classic_shape.popt")
    assert code == 0 and "#dialect opt!" in out
    code, out, _ = run(capsys, "convert", "--to", "unnamed", "--verify", CORPUS / "classic_named.drv")
    assert code == 0 and out.startswith("{[[]]:2/[]:1")


def test_materialize(capsys):
    code, out, _ = run(capsys, "--format", "json", "materialize", CORPUS / "loops_and_triangles.drv")
    data = json.loads(out)
    assert code == 0 and data["violations"] == [] and len(data["cells"]) == 7


def test_missing_file(capsys):
    code, _, err = run(capsys, "count", "nowhere.popt")
    assert code == 2 and "no such file" in err


def test_deterministic(capsys):
    first = run(capsys, "materialize", CORPUS / "glued_pair_of_cells.drv")
    second = run(capsys, "materialize", CORPUS / "glued_pair_of_cells.drv")
    assert first == second


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "opetopic", "count", "arrow"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.strip() == "3"
