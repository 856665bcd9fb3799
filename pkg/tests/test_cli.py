import json
import os
import subprocess
import sys

import pytest

from feynpoly.cli import FAIL, OK, USAGE, run_command
from feynpoly.graphio import dump_graph, load_fixture


def run(argv):
    chunks = []
    code = run_command(argv, out=chunks.append)
    text = "".join(chunks)
    counts = None
    for line in text.splitlines():
        if line.startswith("COUNTS "):
            counts = json.loads(line[len("COUNTS "):])
    return code, text, counts


def test_kirchhoff_command():
    code, text, counts = run(["poly", "kirchhoff", "ws3"])
    assert code == OK
    assert "+1*a1*a2*a4" in text
    assert counts is not None


def test_minor_command():
    code, _, _ = run(["poly", "dodgson", "graph_h", "--rows", "1", "--cols", "4"])
    assert code == OK


def test_chords_enumerate():
    code, _, counts = run(["chords", "enumerate", "--n", "2,1", "--k", "1"])
    assert code == OK
    assert 45 in counts.values()


def test_chords_counts():
    code, text, counts = run(["chords", "counts", "--cycles", "1,2,3,4,5,6,7,8", "--chords", "5-7,6-8"])
    assert code == OK
    assert counts["c2"] == 1 and counts["c3"] == 1


def test_zpoly_level():
    code, _, counts = run(["zpoly", "z0", "graph_h", "--level", "2"])
    assert code == OK
    assert 22 in counts.values()


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "z0-sum", "one_loop", "two_loop"],
        ["verify", "z1-sum", "one_loop", "two_loop"],
        ["verify", "chi-minor", "ws3"],
        ["verify", "dodgson-identity", "--samples", "20"],
        ["verify", "identities", "--samples", "10"],
        ["verify", "stirling", "--max-k", "12"],
        ["verify", "partial-sums", "one_loop", "two_loop"],
    ],
)
def test_verify_commands(argv):
    code, text, _ = run(argv)
    assert code == OK, text


def test_integrand_export(tmp_path):
    out = tmp_path / "one.txt"
    code, text, counts = run(["integrand", "one_loop", "--export", str(out)])
    assert code == OK
    assert counts["reduced_numerator_terms"] == 1
    assert "numerator = +3*a1*a2" in out.read_text()


def test_graph_from_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(dump_graph(load_fixture("two_loop")))
    code, _, counts = run(["zpoly", "z1", str(p)])
    assert code == OK


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nope"],
        ["poly", "kirchhoff", "missing_graph"],
        ["zpoly", "z0", "graph_h", "--level", "9"],
        ["chords", "counts", "--cycles", "1,2,3", "--chords", ""],
        ["verify", "stirling", "--max-k", "0"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, _ = run(argv)
    assert code == USAGE


def test_failure_exit_code(monkeypatch):
    import feynpoly.cli as cli

    monkeypatch.setattr(cli, "REFERENCE_CENSUS", {1: [999]})
    code, text, _ = run(["census", "--loops", "1"])
    assert code == FAIL
    assert "FAIL" in text


def _subprocess_output(threads):
    env = dict(os.environ, FEYNPOLY_THREADS=str(threads))
    res = subprocess.run([sys.executable, "-m", "feynpoly", "integrand", "graph_h", "--counts"],
                         capture_output=True, env=env, check=True)
    return res.stdout


def test_thread_count_determinism():
    one, four = _subprocess_output(1), _subprocess_output(4)
    assert one == four
    assert b"COUNTS " in one


def test_bad_thread_variable():
    env = dict(os.environ, FEYNPOLY_THREADS="zero")
    res = subprocess.run([sys.executable, "-m", "feynpoly", "zpoly", "z0", "one_loop"], capture_output=True, env=env)
    assert res.returncode == USAGE
