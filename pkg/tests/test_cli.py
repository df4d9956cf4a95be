import json
import subprocess
import sys

import pytest

from flyauto.cli import main
from flyauto.corpus import petersen
from flyauto.graph import write_edge_list

TRIANGLE = "add(1,2, add(1,3, add(2,3, oplus(1, oplus(2, 3)))))\n"
P3_EDGES = "3 2 0\n1 2\n2 3\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "triangle.cwt").write_text(TRIANGLE)
    (tmp_path / "p3.edges").write_text(P3_EDGES)
    (tmp_path / "redundant.cwt").write_text("add(1,2, add(1,2, oplus(1, 2)))\n")
    (tmp_path / "bad.cwt").write_text("add(1,2, oplus(1\n")
    (tmp_path / "f.cwt").write_text("f(g(a), a)\n")
    (tmp_path / "q.txt").write_text("exists(X, and(stable(X), card_ge(X, 2)))")
    return tmp_path


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_exit_codes(files, capsys):
    code, out, _ = cli(capsys, "check", "-q", "conn", files / "triangle.cwt")
    assert code == 0 and json.loads(out) == {"value": True}
    code, out, _ = cli(capsys, "check", "-q", "stable(univ)", files / "triangle.cwt")
    assert code == 1 and json.loads(out) == {"value": False}
    code, out, _ = cli(capsys, "check", "-q", "@" + str(files / "q.txt"), files / "p3.edges")
    assert code == 0
    code, out, _ = cli(capsys, "check", "--text", "-q", "2col", files / "p3.edges")
    assert code == 0 and out.strip() == "true"


def test_usage_errors(files, capsys):
    code, _, err = cli(capsys, "check", "-q", "conn", files / "bad.cwt")
    assert code == 2 and err.startswith("error:")
    code, _, err = cli(capsys, "check", "-q", "frob(X", files / "triangle.cwt")
    assert code == 2 and "query" in err
    code, _, err = cli(capsys, "check", files / "triangle.cwt")
    assert code == 2
    code, _, _ = cli(capsys, "check", "-q", "conn", files / "missing.cwt")
    assert code == 2
    code, _, _ = cli(capsys, "compute", "--head", "median", "-q", "stable(X)", files / "p3.edges")
    assert code == 2
    code, _, _ = cli(capsys, "check", "-q", "e(X)", files / "p3.edges")
    assert code == 2


def test_precondition_errors(files, capsys):
    code, _, err = cli(capsys, "check", "--no-normalize", "-q", "regular",
                       files / "redundant.cwt")
    assert code == 3 and "redundant" in err
    code, out, _ = cli(capsys, "check", "-q", "regular", files / "redundant.cwt")
    assert code == 0
    code, _, _ = cli(capsys, "compute", "--dag", "--head", "sat", "-q", "stable(X)",
                     files / "p3.edges")
    assert code == 3


def test_threads_env(files, capsys, monkeypatch):
    monkeypatch.setenv("FLYAUTO_THREADS", "zero")
    assert cli(capsys, "check", "-q", "conn", files / "triangle.cwt")[0] == 2
    monkeypatch.setenv("FLYAUTO_THREADS", "4")
    assert cli(capsys, "check", "-q", "conn", files / "triangle.cwt")[0] == 0


def test_compute_golden(files, capsys):
    code, out, _ = cli(capsys, "compute", "--head", "count", "-q", "stable(X)", files / "p3.edges")
    assert code == 0 and json.loads(out) == {"value": 5}
    _, out, _ = cli(capsys, "compute", "--head", "msp", "-q", "stable(X)", files / "p3.edges")
    assert json.loads(out) == {"value": [{"card": [0], "mult": 1}, {"card": [1], "mult": 3},
                                         {"card": [2], "mult": 1}]}
    _, out, _ = cli(capsys, "compute", "--head", "sat", "-q", "and(stable(X), card_ge(X, 2))",
                    files / "p3.edges")
    assert json.loads(out) == {"value": [[["1", "3"]]]}
    _, out, _ = cli(capsys, "compute", "--head", "maxcard", "-q", "stable(X)", files / "p3.edges")
    assert json.loads(out) == {"value": 2}
    _, out, _ = cli(capsys, "compute", "-q", "maxdircut", files / "p3.edges")
    assert json.loads(out) == {"value": 2}
    _, out, _ = cli(capsys, "compute", "--metrics", "--head", "count", "-q", "stable(X)",
                    files / "triangle.cwt")
    res = json.loads(out)
    assert res["value"] == 4 and set(res["metrics"]) == {"max_state_size", "ndeg", "transitions"}


def test_compute_term_mode(files, capsys):
    _, out, _ = cli(capsys, "compute", "-q", "ht", files / "f.cwt")
    assert json.loads(out) == {"value": 3}
    code, out, _ = cli(capsys, "check", "-q", "unif", files / "f.cwt")
    assert code == 1


def test_compute_on_dag_matches(files, capsys):
    _, a, _ = cli(capsys, "compute", "--head", "count", "-q", "3col", files / "triangle.cwt")
    _, b, _ = cli(capsys, "compute", "--dag", "--head", "count", "-q", "3col",
                  files / "triangle.cwt")
    assert json.loads(a) == json.loads(b) == {"value": 6}


def test_enum(files, capsys):
    code, out, err = cli(capsys, "enum", "-q", "stable(X)", files / "p3.edges")
    rows = [json.loads(ln) for ln in out.splitlines()]
    assert code == 0 and len(rows) == 5 and "5 tuple(s)" in err
    assert {"X": ["1", "3"]} in rows
    _, out, _ = cli(capsys, "enum", "--limit", "1", "-q", "exists(X, stable(X))",
                    files / "p3.edges")
    assert len(out.splitlines()) == 1
    _, out, _ = cli(capsys, "enum", "-q", "edg(x, y)", files / "p3.edges")
    rows = [json.loads(ln) for ln in out.splitlines()]
    assert sorted((r["x"], r["y"]) for r in rows) == [("1", "2"), ("2", "1"), ("2", "3"),
                                                      ("3", "2")]


def test_enum_count_agree(files, capsys):
    for q in ("stable(X)", "and(partition(X1, X2), stable(X1), stable(X2))", "conn(X)"):
        _, out, _ = cli(capsys, "enum", "-q", q, files / "triangle.cwt")
        _, cnt, _ = cli(capsys, "compute", "--head", "count", "-q", q, files / "triangle.cwt")
        assert len(out.splitlines()) == json.loads(cnt)["value"]


def test_normalize_stats_graph_dag(files, capsys):
    src = files / "ex.cwt"
    src.write_text("relab(5>1, add(1,9, add(1,8, oplus(1, oplus(5,8)))))\n")
    code, out, _ = cli(capsys, "normalize", src)
    assert code == 0 and out.strip() == "relab(2>1;3>2,add(1,3,oplus(1,oplus(2,3))))"
    _, out, _ = cli(capsys, "normalize", "--json", src)
    res = json.loads(out)
    assert res["fallback"] is False and res["h"] == {"1": 1, "2": 8}
    _, out, _ = cli(capsys, "stats", src)
    st = json.loads(out)
    assert st["pi"] == [1, 8] and st["good"] is False and st["edges"] == 1
    _, out, _ = cli(capsys, "graph", files / "triangle.cwt")
    assert out.splitlines()[0] == "3 3 0"
    out_file = files / "t.dag"
    code, out, _ = cli(capsys, "dag", "-o", out_file, files / "triangle.cwt")
    assert code == 0 and json.loads(out)["term_size"] == 8
    code, out, _ = cli(capsys, "check", "--dag", "-q", "conn", out_file)
    assert code == 0


def test_output_file(files, capsys):
    target = files / "out.json"
    code, out, _ = cli(capsys, "compute", "-o", target, "--head", "count", "-q", "stable(X)",
                       files / "p3.edges")
    assert code == 0 and out == "" and json.loads(target.read_text()) == {"value": 5}


def test_console_script_runs(tmp_path):
    f = tmp_path / "pet.edges"
    f.write_text(write_edge_list(petersen()))
    r = subprocess.run([sys.executable, "-m", "flyauto", "check", "-q", "3col", str(f)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout) == {"value": True}
