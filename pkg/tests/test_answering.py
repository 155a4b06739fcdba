import itertools
import random
from fractions import Fraction as F
from pathlib import Path

import pytest

from corpus import DEGREES, random_cq, random_ontology
from fuzzy_dllite.answering import (
    ConsistencyAssumptionRequired,
    InconsistentOntology,
    UnsupportedSemantics,
    answer_at_least,
    answer_request,
    answer_threshold,
    check_consistency,
    cq_to_tq,
    degree_of,
    positive_answers,
    top_k,
    violation_query,
)
from fuzzy_dllite.canonical import build_complete, cq_degrees_on, existential_cycle_check
from fuzzy_dllite.ontology import Axiom, ConceptAssertion, ConceptName, Exists, Not, Ontology, Role, RoleAssertion
from fuzzy_dllite.queries import ThresholdAtom, Var, cq, tq
from fuzzy_dllite.syntax import parse_ontology, parse_query
from fuzzy_dllite.tnorms import TNorm

G, P, L = TNorm.GODEL, TNorm.PRODUCT, TNorm.LUKASIEWICZ
DATA = Path(__file__).parent / "data"


def load(name):
    text = (DATA / name).read_text()
    return parse_ontology(text) if name.endswith(".fdl") else parse_query(text)


@pytest.fixture(scope="module")
def exa():
    return load("exa.fdl")


popular = cq(["x"], [("Popular", "x")])


def chain(n):
    tbox = tuple(Axiom(ConceptName(f"A{i}"), ConceptName(f"A{i + 1}"), F("0.9")) for i in range(n))
    return Ontology(tbox, (ConceptAssertion(ConceptName("A0"), "a", F(1)),))


def test_consistency(exa):
    assert not check_consistency(load("o0.fdl"), G)
    assert not check_consistency(load("o0.fdl"), P)
    assert check_consistency(exa, G) and check_consistency(exa, P)
    with pytest.raises(UnsupportedSemantics):
        check_consistency(load("o0.fdl"), L)


def test_consistency_through_existentials():
    o = Ontology((Axiom(ConceptName("A"), Exists(Role("P")), F("0.2")),
                  Axiom(Exists(Role("P")), Not(ConceptName("B")), F("0.3"))),
                 (ConceptAssertion(ConceptName("A"), "a", F("0.1")),
                  ConceptAssertion(ConceptName("B"), "a", F("0.1"))))
    assert not check_consistency(o, G)
    disjoint = (Axiom(Role("P"), Not(Role("S", True)), F(1)),)
    clash = Ontology(disjoint, (RoleAssertion("P", "a", "b", F("0.2")), RoleAssertion("S", "b", "a", F("0.2"))))
    fine = Ontology(disjoint, (RoleAssertion("P", "a", "b", F("0.2")), RoleAssertion("S", "a", "b", F("0.2"))))
    assert not check_consistency(clash, P)
    assert check_consistency(fine, P)
    role = Ontology(disjoint, ())
    assert len(violation_query(role.tbox[0]).atoms) == 2


def test_at_least(exa):
    tuples = lambda s: {t for (t,) in s.tuples()}
    assert tuples(answer_at_least(exa, popular, F("0.6"))) == {"modernArt", "contArt", "comic"}
    assert tuples(answer_at_least(exa, popular, F("0.8"))) == {"comic"}
    assert tuples(answer_at_least(exa, load("exa2.fq"), F("0.6"))) == {"irish"}
    with pytest.raises(ValueError):
        answer_at_least(exa, popular, F(0))
    with pytest.raises(InconsistentOntology):
        answer_at_least(load("o0.fdl"), cq(["x"], [("A1", "x")]), F("0.5"))


@pytest.mark.parametrize("search", ["linear", "binary"])
def test_degree_of(exa, search):
    assert degree_of(exa, load("exa2.fq"), ("irish",), search) == F("0.6")
    assert degree_of(exa, popular, ("comic",), search) == F("0.8")
    assert degree_of(exa, popular, ("sioux",), search) == 0
    with pytest.raises(ValueError):
        degree_of(exa, popular, ("a", "b"), search)


def test_top_k(exa):
    assert list(top_k(exa, popular, 1)) == [(("comic",), F("0.8"))]
    assert list(top_k(exa, popular, 3)) == [
        (("comic",), F("0.8")), (("contArt",), F("0.6")), (("modernArt",), F("0.6"))]
    assert len(top_k(exa, popular, 50)) == 3
    assert list(top_k(exa, popular, 2)) == [(("comic",), F("0.8")), (("contArt",), F("0.6"))]


def test_threshold(exa):
    assert answer_threshold(exa, load("exa2tq.fq"), G).tuples() == set()
    got = answer_threshold(exa, tq(["x"], [("Popular", "x", "0.5")]), G).tuples()
    assert got == {("modernArt",), ("contArt",), ("comic",)}
    got = answer_threshold(exa, tq(["x"], [("Popular", "x", "0.61")]), G).tuples()
    assert got == {("comic",)}
    with pytest.raises(ConsistencyAssumptionRequired):
        answer_threshold(exa, load("exa2tq.fq"), L)
    assert answer_threshold(exa, load("exa2tq.fq"), L, assume_consistent=True).tuples() == set()
    with pytest.raises(InconsistentOntology):
        answer_threshold(load("o0.fdl"), tq(["x"], [("A1", "x", "0.5")]), P)


def test_cq_to_tq(exa):
    t = cq_to_tq(load("exa2.fq"), F("0.6"))
    assert [a.bound for a in t.atoms] == [F("0.6")] * 3
    assert cq_to_tq(popular, F("0.5")).atoms == (ThresholdAtom("Popular", (Var("x"),), F("0.5")),)
    for th in (F("0.5"), F("0.6"), F("0.7"), F("0.8"), F(1)):
        assert answer_threshold(exa, cq_to_tq(popular, th), G).tuples() == \
            answer_at_least(exa, popular, th).tuples()
    with pytest.raises(ValueError):
        cq_to_tq(popular, 0)


def test_positive(exa):
    assert positive_answers(chain(4), cq(["x"], [("A4", "x")]), P).tuples() == {("a",)}
    got = positive_answers(exa, popular, P).tuples()
    assert got == {("modernArt",), ("contArt",), ("comic",)}
    with pytest.raises(UnsupportedSemantics):
        positive_answers(load("o2.fdl"), load("a2.fq"), L)


def test_request_validation(exa):
    with pytest.raises(UnsupportedSemantics):
        answer_request(exa, popular, "at_least", P, F("0.5"))
    with pytest.raises(UnsupportedSemantics):
        answer_request(exa, popular, "top_k", L, 2)
    with pytest.raises(ValueError):
        answer_request(exa, popular, "threshold", G)
    with pytest.raises(ValueError):
        answer_request(exa, load("exa2tq.fq"), "positive", G)
    with pytest.raises(ValueError):
        answer_request(exa, popular, "everything", G)
    assert answer_request(exa, popular, "degree_of", G, ("comic",)).degrees() == {("comic",): F("0.8")}


def _acyclic(rng, k, n):
    out = []
    while len(out) < n:
        o = random_ontology(rng, n_concepts=4, n_roles=2, n_inds=4)
        if not existential_cycle_check(o) or not check_consistency(o, k):
            continue
        res = build_complete(o, k)
        if res.complete:
            out.append((o, res.interpretation))
    return out


def test_antitone_and_cross_method():
    rng = random.Random(41)
    for o, i in _acyclic(rng, G, 40):
        q = random_cq(rng, o)
        prev = None
        oracle = cq_degrees_on(i, q, G)
        for th in DEGREES:
            cur = answer_at_least(o, q, th).tuples()
            assert prev is None or cur <= prev
            assert cur == answer_threshold(o, cq_to_tq(q, th), G).tuples()
            assert cur == {a for a, d in oracle.items() if d >= th}
            prev = cur


def test_binary_search_agrees():
    rng = random.Random(42)
    for o, _ in _acyclic(rng, G, 30):
        q = random_cq(rng, o)
        for a in itertools.product(o.individuals, repeat=len(q.head)):
            assert degree_of(o, q, a, "linear") == degree_of(o, q, a, "binary")


def test_product_positive_support():
    rng = random.Random(43)
    for o, i in _acyclic(rng, P, 40):
        q = random_cq(rng, o)
        support = {a for a, d in cq_degrees_on(i, q, P).items() if d > 0}
        assert positive_answers(o, q, P).tuples() == support
