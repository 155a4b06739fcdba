import random
import warnings
from fractions import Fraction as F
from pathlib import Path

import pytest

from corpus import random_ontology, random_tq
from fuzzy_dllite.canonical import build_complete, existential_cycle_check, tq_answers_on
from fuzzy_dllite.ontology import (
    Axiom,
    ConceptAssertion,
    ConceptName,
    Exists,
    Not,
    Ontology,
    Role,
    RoleAssertion,
    classical_version,
    cut,
    degree_set,
    make_ontology,
    normalize,
)
from fuzzy_dllite.syntax import parse_ontology
from fuzzy_dllite.tnorms import TNorm

DATA = Path(__file__).parent / "data"
A, B = ConceptName("A"), ConceptName("B")
P, S = Role("P"), Role("S")


@pytest.fixture(scope="module")
def exa():
    return parse_ontology((DATA / "exa.fdl").read_text())


@pytest.fixture(scope="module")
def o0():
    return parse_ontology((DATA / "o0.fdl").read_text())


def test_exa_shape(exa):
    assert len(exa.tbox) == 7 and len(exa.abox) == 12
    assert "comic" in exa.individuals
    assert {"locIn", "near"} <= set(exa.signature.roles)


def test_axiom_invariants():
    with pytest.raises(ValueError):
        Axiom(Not(A), B, F(1))
    with pytest.raises(ValueError):
        Ontology((Axiom(A, B, F(0)),), ())
    with pytest.raises(ValueError):
        Axiom(A, B, F(3, 2))
    with pytest.raises((TypeError, ValueError)):
        Axiom(P, A, F(1))


def test_normalize_splits_exists_to_exists():
    o = Ontology((Axiom(Exists(P), Exists(S), F("0.8")),), ())
    n = normalize(o)
    assert n.is_normalized() and not o.is_normalized()
    (a1, a2) = n.tbox
    fresh = a1.rhs
    assert isinstance(fresh, ConceptName) and fresh.name.startswith("__norm")
    assert a1 == Axiom(Exists(P), fresh, F(1))
    assert a2 == Axiom(fresh, Exists(S), F("0.8"))


def test_normalize_identity(exa):
    assert normalize(exa) == exa
    plain = Ontology((Axiom(A, B, F(1)),), ())
    assert normalize(plain) == plain


def test_classical_version(o0):
    c = classical_version(o0)
    assert all(st.degree == 1 for st in c.statements)
    assert len(c.statements) == len(o0.statements)
    assert classical_version(c) == c
    assert classical_version(Ontology()) == Ontology()


def test_cut_exa(exa):
    c = cut(exa, F("0.7"))
    dropped = set(exa.statements) - set(c.statements)
    assert dropped == {
        Axiom(ConceptName("Museum"), ConceptName("Popular"), F("0.6")),
        Axiom(Exists(Role("locIn")), Not(ConceptName("Cheap")), F("0.5")),
        ConceptAssertion(ConceptName("Cheap"), "irish", F("0.6")),
    }
    assert len(c.statements) == 16


def test_cut_edges(exa):
    assert cut(exa, degree_set(exa)[0]) == exa
    assert all(st.degree == 1 for st in cut(exa, F(1)).statements)
    with pytest.raises(ValueError):
        cut(exa, F(0))


def test_degree_set(exa):
    assert degree_set(exa) == [F("0.5"), F("0.6"), F("0.7"), F("0.8"), F(1)]
    assert degree_set(Ontology()) == [F(1)]
    assert degree_set(Ontology((Axiom(A, B, F(1)),), ())) == [F(1)]


def test_cut_properties():
    rng = random.Random(3)
    for _ in range(100):
        o = random_ontology(rng)
        t1, t2 = F(rng.randint(1, 10), 10), F(rng.randint(1, 10), 10)
        assert set(cut(o, t1).statements) <= set(o.statements)
        assert cut(cut(o, t1), t2) == cut(o, max(t1, t2))
        flat = classical_version(Ontology(tuple(a for a in o.tbox if a.degree >= t1),
                                          tuple(a for a in o.abox if a.degree >= t1)))
        assert classical_version(cut(o, t1)) == flat


def test_make_ontology_drops_zero_degree():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        o = make_ontology([
            ConceptAssertion(A, "a", F(0)),
            RoleAssertion("P", "a", "b", F("0.5")),
            Axiom(A, B, F(1)),
        ])
    assert len(caught) == 1
    assert len(o.abox) == 1 and len(o.tbox) == 1


def test_ontology_equality_is_set_based():
    x = Ontology((Axiom(A, B, F(1)), Axiom(B, A, F(1))), ())
    y = Ontology((Axiom(B, A, F(1)), Axiom(A, B, F(1))), ())
    assert x == y and hash(x) == hash(y)


def test_normalize_preserves_answers():
    rng = random.Random(12)
    checked = 0
    for _ in range(2000):
        if checked == 40:
            break
        o = random_ontology(rng, n_concepts=3, n_roles=2, n_axioms=rng.randint(2, 6))
        o = o.with_statements([Axiom(Exists(Role("P0", True)), Exists(Role("P1")), F("0.7"))])
        if not existential_cycle_check(o):
            continue
        before = build_complete(o, TNorm.GODEL, max_budget=4096)
        after = build_complete(normalize(o), TNorm.GODEL, max_budget=4096)
        if not (before.complete and after.complete):
            continue
        checked += 1
        for _ in range(3):
            q = random_tq(rng, o)
            assert tq_answers_on(before.interpretation, q) == tq_answers_on(after.interpretation, q)
    assert checked == 40
