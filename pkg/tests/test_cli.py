import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from fuzzy_dllite.cli import main
from fuzzy_dllite.hardness import parse_horn

DATA = Path(__file__).parent / "data"
EXA = str(DATA / "exa.fdl")
POPULAR = str(DATA / "popular.fq")


def run(*args, code=0):
    res = CliRunner().invoke(main, [str(a) for a in args])
    assert res.exit_code == code, (res.output, res.exception)
    return res


def rows(res):
    return [line.split("\t") for line in res.stdout.splitlines() if line]


def test_at_least():
    assert rows(run("query", EXA, "-q", POPULAR, "--at-least", "0.6")) == [["comic"], ["contArt"], ["modernArt"]]
    assert rows(run("query", EXA, "-q", POPULAR, "--at-least", "4/5")) == [["comic"]]


def test_threshold_no_rows():
    assert run("query", EXA, "-q", DATA / "exa2tq.fq", "--threshold").stdout == ""


def test_check_exit_codes():
    assert run("check", EXA).stdout.strip() == "consistent"
    assert run("check", DATA / "o0.fdl", "--tnorm", "product", code=1).stdout.strip() == "inconsistent"
    run("check", DATA / "o0.fdl", "--tnorm", "lukasiewicz", code=3)
    run("check", EXA, "--tnorm", "hamacher", code=2)


def test_json_shape():
    out = json.loads(run("query", EXA, "-q", POPULAR, "--top-k", "3", "--format", "json").stdout)
    assert out == {"answers": [{"tuple": ["comic"], "degree": "0.8"},
                               {"tuple": ["contArt"], "degree": "0.6"},
                               {"tuple": ["modernArt"], "degree": "0.6"}],
                   "complete": True}
    plain = json.loads(run("query", EXA, "-q", POPULAR, "--positive", "--format", "json").stdout)
    assert {tuple(a["tuple"]) for a in plain["answers"]} == {("comic",), ("contArt",), ("modernArt",)}


def test_degree_of():
    assert rows(run("query", EXA, "-q", DATA / "exa2.fq", "--degree-of", "irish")) == [["irish", "0.6"]]
    run("query", EXA, "-q", DATA / "exa2.fq", "--degree-of", "irish,comic", code=2)


def test_mode_validation():
    run("query", EXA, "-q", POPULAR, code=2)
    run("query", EXA, "-q", POPULAR, "--threshold", code=2)
    run("query", EXA, "-q", POPULAR, "--at-least", "0.5", "--positive", code=2)
    run("query", EXA, "-q", POPULAR, "--at-least", "0", code=2)
    run("query", EXA, "-q", POPULAR, "--at-least", "0.5", "--tnorm", "product", code=3)


def test_lukasiewicz_needs_assumption():
    tq = DATA / "exa2tq.fq"
    run("query", EXA, "-q", tq, "--threshold", "-t", "lukasiewicz", code=3)
    run("query", EXA, "-q", tq, "--threshold", "-t", "lukasiewicz", "--assume-consistent")


def test_inconsistent_query_exits_1(tmp_path):
    q = tmp_path / "a1.fq"
    q.write_text("q(x) :- A1(x).\n")
    run("query", DATA / "o0.fdl", "-q", q, "--at-least", "0.5", code=1)


def test_parse_error_position(tmp_path):
    bad = tmp_path / "bad.fdl"
    bad.write_text("A SUBC B >= 1\nNOT A SUBC B >= 1\n")
    res = run("check", bad, code=2)
    assert "bad.fdl:2:1:" in res.stderr
    run("check", tmp_path / "missing.fdl", code=2)


@pytest.mark.parametrize("theta", ["0.5", "0.6", "0.7", "0.8", "1"])
def test_at_least_matches_threshold(tmp_path, theta):
    q = tmp_path / "tq.fq"
    q.write_text(f"q(x) :- Cheap(x) >= {theta}, Popular(y) >= {theta}, near(x, y) >= {theta}.\n")
    a = run("query", EXA, "-q", DATA / "exa2.fq", "--at-least", theta).stdout
    b = run("query", EXA, "-q", q, "--threshold").stdout
    assert a == b


def test_rewrite():
    lines = run("rewrite", EXA, "-q", DATA / "exa2tq.fq").stdout.splitlines()
    assert lines[0] == "q(x) :- Cheap(x) >= 0.8, Popular(y) >= 0.6, near(x, y) >= 0.6."
    assert "q(x) :- Cheap(x) >= 0.8, Museum(y1) >= 0.6, locIn(x, y1) >= 0.6." in lines
    assert len(lines) == 4
    run("rewrite", EXA, "-q", POPULAR, code=2)


def test_materialize(tmp_path):
    o = tmp_path / "ex4.fdl"
    o.write_text("A SUBC EX R >= 0.3\nB SUBC EX R >= 0.5\nA(a) >= 1\nB(a) >= 1\n")
    out = rows(run("materialize", o))
    assert ["C", "A", "a", "1"] in out
    roles = [r for r in out if r[0] == "R"]
    assert roles and all(r[3].startswith("_n:") for r in roles)
    assert max(r[4] for r in roles) == "0.5"
    o2 = rows(run("materialize", DATA / "o2.fdl", "-t", "product"))
    assert ["C", "A2", "a", "0.25"] in o2


def test_materialize_budget(tmp_path):
    o = tmp_path / "cyc.fdl"
    o.write_text("A SUBC EX P >= 1\nEX P- SUBC A >= 1\nA(a) >= 1\n")
    res = run("materialize", o, "--budget", "3", "--format", "json")
    out = json.loads(res.stdout)
    assert out["complete"] is False and len(out["roles"]) == 3
    assert "incomplete" in res.stderr


def test_gen_hardness(tmp_path):
    text = run("gen-hardness", DATA / "sat.cnf").stdout
    h = parse_horn(text)
    assert len(h.axioms) == 3 * 4 + 2
    target = tmp_path / "out.fdl"
    run("gen-hardness", DATA / "sat.cnf", "-o", target)
    assert target.read_text() == text
    bad = tmp_path / "bad.cnf"
    bad.write_text("1 2 0\n")
    run("gen-hardness", bad, code=2)
