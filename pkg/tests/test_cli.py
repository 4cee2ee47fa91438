import subprocess
import sys

import pytest

from smtnorm.cli import main, parse_seeds
from smtnorm.generate import GenConfig, random_script_text

BAD = "(declare-const x Int)\n(assert (> y 0))\n"


@pytest.fixture
def bench(tmp_path, running_example_text):
    p = tmp_path / "bench.smt2"
    p.write_text(running_example_text)
    return str(p)


@pytest.fixture
def bad(tmp_path):
    p = tmp_path / "bad.smt2"
    p.write_text(BAD)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize(capsys, bench):
    code, out, err = run(capsys, "normalize", "--no-antisym", bench)
    assert code == 0 and err == ""
    assert out.splitlines()[7] == "(assert (< (+ X1 X2) (* X1 X3)))"


def test_normalize_default_applies_antisym(capsys, bench):
    _, out, _ = run(capsys, "normalize", bench)
    assert "(assert (< " not in out


def test_normalize_keep_unused_and_prefix(capsys, tmp_path):
    p = tmp_path / "u.smt2"
    p.write_text("(declare-const a Int)(declare-const b Int)(assert (> b 0))")
    _, out, _ = run(capsys, "normalize", "--keep-unused", "--prefix", "N", str(p))
    assert out == "(declare-const N1 Int)\n(declare-const N2 Int)\n(assert (> N1 0))\n"


def test_normalize_antisym_table(capsys, tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("< >\n")
    p = tmp_path / "a.smt2"
    p.write_text("(declare-const a Int)(declare-const b Int)(assert (> a b))")
    _, out, _ = run(capsys, "normalize", "--antisym-table", str(table), str(p))
    assert out.splitlines()[-1] == "(assert (< X1 X2))"


def test_scramble_is_deterministic(capsys, bench):
    code, first, _ = run(capsys, "scramble", "--seed", "7", "--ops", "shuffle,rename", bench)
    _, second, _ = run(capsys, "scramble", "--seed", "7", "--ops", "shuffle,rename", bench)
    assert code == 0 and first == second
    assert "u1" in first


def test_uniqueness_csv(capsys, bench):
    code, out, _ = run(capsys, "uniqueness", "--seeds", "1..10", "--ops", "shuffle,rename", bench)
    assert code == 0
    header, row = out.splitlines()
    assert header == "benchmark,seeds,distinct"
    name, seeds, distinct = row.split(",")
    assert (name, seeds) == (bench, "10")
    assert 1 <= int(distinct) <= 10


def test_uniqueness_batch_continues_after_failure(capsys, bench, bad, tmp_path):
    other = tmp_path / "other.smt2"
    other.write_text(random_script_text(3, GenConfig(assertions=8)))
    code, out, err = run(capsys, "uniqueness", "--seeds", "1..5", "--jobs", "2", bench, bad, str(other))
    assert code == 2
    rows = out.splitlines()[1:]
    assert rows[1] == f"{bad},5,error"
    assert rows[2] == f"{other},5,1"
    assert "undeclared" in err


def test_uniqueness_exact_and_identity(capsys, tmp_path):
    p = tmp_path / "s.smt2"
    p.write_text(random_script_text(4, GenConfig(assertions=4, constants=5)))
    _, out, _ = run(capsys, "uniqueness", "--normalizer", "exact", "--seeds", "1..6", str(p))
    assert out.splitlines()[1].endswith(",1")
    _, out, _ = run(capsys, "uniqueness", "--normalizer", "none", "--seeds", "1..6", str(p))
    assert out.splitlines()[1].endswith(",6")


def test_exact_normalize(capsys, tmp_path):
    p = tmp_path / "s.smt2"
    p.write_text("(declare-const a Int)(declare-const b Int)(assert (< b 1))(assert (< a b))")
    code, out, _ = run(capsys, "exact-normalize", str(p))
    assert code == 0
    assert out.splitlines()[-2:] == ["(assert (> 1 X1))", "(assert (> X1 X2))"]
    _, out, _ = run(capsys, "exact-normalize", "--no-antisym", str(p))
    assert out.splitlines()[-2:] == ["(assert (< X1 1))", "(assert (< X2 X1))"]


def test_exact_normalize_limit(capsys, tmp_path):
    p = tmp_path / "big.smt2"
    p.write_text(random_script_text(1, GenConfig(assertions=9)))
    code, out, err = run(capsys, "exact-normalize", "--max-assertions", "8", str(p))
    assert code == 2 and out == ""
    assert "limit-exceeded" in err


def test_iso(capsys, tmp_path):
    g1 = tmp_path / "g1.txt"
    g2 = tmp_path / "g2.txt"
    g3 = tmp_path / "g3.txt"
    g1.write_text("4 4\n1 2\n2 3\n3 4\n1 4\n")
    g2.write_text("4 4\n1 3\n3 2\n2 4\n1 4\n")
    g3.write_text("4 3\n1 2\n2 3\n3 4\n")
    assert run(capsys, "iso", str(g1), str(g2))[1] == "isomorphic\n"
    assert run(capsys, "iso", str(g1), str(g3))[1] == "not-isomorphic\n"
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n1 1\n")
    assert run(capsys, "iso", str(g1), str(bad))[0] == 2


def test_stability(capsys, tmp_path, mock_cmd):
    p = tmp_path / "s.smt2"
    p.write_text("(set-info :source |mock:sat|)\n" + random_script_text(1, GenConfig(assertions=3)))
    out_path = tmp_path / "report.csv"
    code, out, _ = run(
        capsys, "stability", "--seeds", "1..60", "--solver-cmd", mock_cmd, "--timeout", "5", "--jobs", "8", "--out", str(out_path), str(p)
    )
    assert code == 0 and out == ""
    header, row = out_path.read_text().splitlines()
    assert header == "benchmark,reps,solved,pr2,mad,category"
    fields = row.split(",")
    assert fields[:3] == [str(p), "60", "60"]
    assert fields[5] == "stable"
    assert len(fields[3].split(".")[1]) == 3


def test_stability_bad_file_gets_error_row(capsys, tmp_path, bad, mock_cmd):
    code, out, _ = run(capsys, "stability", "--seeds", "1..2", "--solver-cmd", mock_cmd, bad)
    assert code == 2
    assert out.splitlines()[1] == f"{bad},2,0,,,error"


def test_parse_error_exit_code(capsys, bench, bad):
    code, out, err = run(capsys, "normalize", bad, bench)
    assert code == 2
    assert out.count("(check-sat)") == 1
    assert "bad.smt2:2:" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["normalize"],
        ["normalize", "/nonexistent.smt2"],
        ["scramble", "--ops", "shuffle,nope", "x"],
        ["uniqueness", "--seeds", "5..1", "x"],
        ["stability", "x"],
        ["scramble", "--seed", "-3", "BENCH"],
        ["stability", "--solver-cmd", "z3", "BENCH"],
        ["normalize", "--prefix", "1x", "BENCH"],
        ["normalize", "--antisym-table", "/nonexistent", "BENCH"],
        ["uniqueness", "--jobs", "0", "BENCH"],
    ],
)
def test_usage_errors(capsys, bench, argv):
    argv = [bench if a == "BENCH" else a for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert err


def test_parse_seeds():
    assert parse_seeds("1..3") == [1, 2, 3]
    assert parse_seeds("4,9") == [4, 9]
    assert parse_seeds("7") == [7]


def test_module_entry_point(bench):
    proc = subprocess.run([sys.executable, "-m", "smtnorm", "normalize", bench], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("(set-logic QF_UFLIA)\n")
    assert proc.stderr == ""
