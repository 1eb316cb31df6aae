import io
import subprocess
import sys

import pytest

from outtree.cli import main
from outtree.universal import parse_family, verify_universal


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_solve_tree_single_arc(files):
    g = files("g.txt", "2 1\n0 1\n")
    t = files("t.txt", "-1 0\n")
    code, text = run(["solve", "tree", "-g", g, "-t", t, "--mode", "det"])
    assert code == 0
    lines = text.splitlines()
    assert lines[:2] == ["YES", "roots: 0"]
    assert lines[-1].startswith("stats: leaf_calls=")


def test_solve_tree_pattern_too_large(files):
    g = files("g.txt", "2 1\n0 1\n")
    t = files("t.txt", "-1 0 1\n")
    code, text = run(["solve", "tree", "-g", g, "-t", t])
    assert code == 1
    assert text.splitlines()[0] == "NO"


def test_malformed_graph(files, capsys):
    g = files("g.txt", "2 1\n0 0\n")
    t = files("t.txt", "-1 0\n")
    code, _ = run(["solve", "tree", "-g", g, "-t", t])
    assert code == 2
    assert "self-loop" in capsys.readouterr().err


def test_missing_file(files):
    t = files("t.txt", "-1 0\n")
    assert run(["solve", "tree", "-g", "/nonexistent/g.txt", "-t", t])[0] == 2


@pytest.mark.parametrize("mode", ["rand", "det", "ayz", "brute"])
def test_witness_lines(files, mode):
    g = files("g.txt", "4 3\n0 1\n1 2\n2 3\n")
    t = files("t.txt", "-1 0 1\n")
    argv = ["solve", "tree", "-g", g, "-t", t, "--mode", mode, "--witness"]
    if mode in ("rand", "ayz"):
        argv += ["--seed", "4"]
    code, text = run(argv)
    assert code == 0
    lines = text.splitlines()
    assert lines[1] == "roots: 0 1"
    assert lines[2:5] == ["map 0 -> 0", "map 1 -> 1", "map 2 -> 2"]


def test_flag_validation(files):
    g = files("g.txt", "2 1\n0 1\n")
    t = files("t.txt", "-1 0\n")
    assert run(["solve", "tree", "-g", g, "-t", t, "--mode", "det", "--seed", "1"])[0] == 2
    assert run(["solve", "tree", "-g", g, "-t", t, "--mode", "ayz", "--reps", "2"])[0] == 2
    assert run(["solve", "tree", "-g", g, "-t", t, "--mode", "rand", "--reps", "0"])[0] == 2
    assert run(["solve", "tree", "-g", g, "-t", t, "--mode", "magic"])[0] == 2
    assert run(["solve", "tree", "-g", g, "-t", t, "--mode", "rand", "--reps", "3"])[0] == 0


def test_solve_iob(files):
    g = files("g.txt", "4 3\n0 1\n1 2\n2 3\n")
    code, text = run(["solve", "iob", "-g", g, "-k", "3"])
    assert code == 0
    assert text == "YES\n0 1\n1 2\n2 3\n# internal: 3\n"
    code, text = run(["solve", "iob", "-g", g, "-k", "4"])
    assert (code, text) == (1, "NO\n")
    assert run(["solve", "iob", "-g", g, "-k", "0"])[0] == 2


def test_enum_trees():
    code, text = run(["enum", "trees", "-k", "4"])
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 5 and lines[-1] == "count: 4"
    assert lines[0] == "-1 0 1 2"
    assert run(["enum", "trees", "-k", "5", "--leaves", "2"])[1].endswith("count: 4\n")
    assert run(["enum", "trees", "-k", "3", "--minimal"])[1].endswith("count: 2\n")
    assert run(["enum", "trees", "-k", "0"])[0] == 2
    assert run(["enum", "trees", "-k", "11", "--minimal"])[0] == 2


def test_gen_universal(tmp_path):
    code, text = run(["gen", "universal", "-n", "3", "-k", "2"])
    assert code == 0
    assert verify_universal(parse_family(text))
    code, cached = run(["gen", "universal", "-n", "5", "-k", "3", "--cache-dir", str(tmp_path)])
    assert code == 0 and (tmp_path / "universal_5_3.txt").read_text() == cached
    assert run(["gen", "universal", "-n", "2", "-k", "3"])[0] == 2


def test_gen_planted(tmp_path):
    g, t = tmp_path / "g.txt", tmp_path / "t.txt"
    argv = ["gen", "planted", "-n", "8", "-k", "4", "--seed", "3", "--graph-out", str(g), "--tree-out", str(t)]
    code, text = run(argv)
    assert code == 0 and text.startswith("root: ")
    root = text.splitlines()[0].split()[1]
    code, solved = run(["solve", "tree", "-g", str(g), "-t", str(t)])
    assert code == 0
    assert root in solved.splitlines()[1].split()[1:]


def test_debug_split(files):
    t = files("t.txt", "-1 0 1 2\n")
    code, text = run(["debug", "split", "-t", t])
    assert code == 0
    assert text.splitlines()[0] == "v_star: 1 (found)"
    assert "v_b: 1" in text
    assert run(["debug", "split", "-t", t, "--restricted", "1,2,3"])[0] == 2
    assert run(["debug", "split", "-t", t, "--target", "9"])[0] == 2
    assert run(["debug", "split", "-t", t, "--restricted", "a"])[0] == 2


def test_bench_csv():
    code, text = run(["bench", "-n", "8", "-k", "3,4", "--modes", "rand,det", "--trials", "2", "--no-timing"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "n,k,mode,seed,found,leaf_calls,trials_executed,wall_ns"
    assert len(lines) == 1 + 2 * 3
    assert all(line.endswith(",") for line in lines[1:])
    assert run(["bench", "-n", "3", "-k", "4"])[0] == 2
    assert run(["bench", "-n", "8", "-k", "3", "--modes", "fast"])[0] == 2


def test_usage_errors_exit_two():
    assert run([])[0] == 2
    assert run(["solve"])[0] == 2
    assert run(["--help"])[0] == 0


def test_module_entry_point(files):
    g = files("g.txt", "2 1\n0 1\n")
    t = files("t.txt", "-1 0\n")
    proc = subprocess.run([sys.executable, "-m", "outtree", "solve", "tree", "-g", g, "-t", t],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("YES\nroots: 0\n")
