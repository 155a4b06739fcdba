import random
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from corpus import random_cq, random_ontology, random_tq
from fuzzy_dllite.ontology import Axiom, ConceptName, Exists, Not, Ontology, Role
from fuzzy_dllite.queries import ConjunctiveQuery, Ind, ThresholdQuery, Var
from fuzzy_dllite.syntax import (
    SourceError,
    parse_ontology,
    parse_queries,
    parse_query,
    parse_union,
    serialize_ontology,
    serialize_query,
    serialize_union,
)

DATA = Path(__file__).parent / "data"


def test_example_axioms():
    o = parse_ontology("Museum SUBC Popular >= 0.6\nEX locIn SUBC NOT Cheap >= 0.5\n")
    assert o.tbox == (
        Axiom(ConceptName("Museum"), ConceptName("Popular"), F("0.6")),
        Axiom(Exists(Role("locIn")), Not(ConceptName("Cheap")), F("0.5")),
    )


def test_roles_and_rationals():
    o = parse_ontology("P- SUBR NOT S >= 2/3  # trailing comment\nEX P- SUBC A >= 1\n")
    assert o.tbox[0] == Axiom(Role("P", True), Not(Role("S")), F(2, 3))
    assert o.tbox[1].lhs == Exists(Role("P", True))


@pytest.mark.parametrize("text, line, column", [
    ("NOT A SUBC B >= 1", 1, 1),
    ("A SUBC B >= 0", 1, 13),
    ("A SUBC B >= 1.5", 1, 13),
    ("A SUBC B", 1, 9),
    ("# header\nA(a) >= 1 junk", 2, 11),
    ("__norm1 SUBC B >= 1", 1, 1),
    ("A SUBC EX >= 1", 1, 11),
])
def test_errors_carry_positions(text, line, column):
    with pytest.raises(SourceError) as err:
        parse_ontology(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_running_queries():
    q = parse_query((DATA / "exa2.fq").read_text())
    assert isinstance(q, ConjunctiveQuery)
    assert q.head == (Var("x"),) and len(q.atoms) == 3
    t = parse_query((DATA / "exa2tq.fq").read_text())
    assert isinstance(t, ThresholdQuery)
    assert [a.bound for a in t.atoms] == [F("0.8"), F("0.6"), F("0.6")]


def test_boolean_and_anonymous():
    q = parse_query("q() :- A(_).")
    assert q.head == () and q.atoms[0].terms[0].anonymous
    two = parse_query("q() :- P(_, _).")
    assert two.atoms[0].terms[0] != two.atoms[0].terms[1]


def test_quoted_individuals():
    q = parse_query("q(x) :- P(x, 'a'), Q(\"o'b\", x).")
    assert q.atoms[0].terms[1] == Ind("a")
    assert q.atoms[1].terms[0] == Ind("o'b")
    assert parse_query(serialize_query(q)) == q


@pytest.mark.parametrize("text", [
    "q(x) :- A(y).",
    "q(x) :- A(x)",
    "q(x) :- A(x) >= 0.5, B(x).",
    "q(_) :- A(_).",
    "q(x) :- A(x) >= 0.",
    "q(x) :- A(x, y, z).",
])
def test_query_errors(text):
    with pytest.raises(SourceError):
        parse_query(text)


def test_parse_query_needs_exactly_one():
    with pytest.raises(SourceError):
        parse_query("q(x) :- A(x).\nq(x) :- B(x).")
    assert len(parse_queries("q(x) :- A(x).\nq(x) :- B(x).")) == 2


def test_formatting():
    assert serialize_ontology(Ontology()) == ""
    o = Ontology((Axiom(ConceptName("A"), ConceptName("B"), F(2, 3)),
                  Axiom(ConceptName("B"), ConceptName("C"), F("0.6"))), ())
    assert serialize_ontology(o) == "A SUBC B >= 2/3\nB SUBC C >= 0.6\n"


def test_exa_round_trip():
    o = parse_ontology((DATA / "exa.fdl").read_text())
    assert parse_ontology(serialize_ontology(o)) == o


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_round_trip(seed):
    rng = random.Random(seed)
    o = random_ontology(rng)
    assert parse_ontology(serialize_ontology(o)) == o
    for q in (random_tq(rng, o), random_cq(rng, o)):
        back = parse_query(serialize_query(q))
        assert serialize_query(back) == serialize_query(q)
        assert back.head == q.head and len(back.atoms) == len(q.atoms)


def test_union_round_trip():
    u = parse_union("q(x) :- A(x) >= 0.5.\nq(x) :- B(x) >= 0.5.\n")
    assert len(u) == 2
    assert parse_union(serialize_union(u)).queries == u.queries
