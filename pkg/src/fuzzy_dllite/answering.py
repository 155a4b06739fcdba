"""Consistency checking and the query answering pipelines, per t-norm."""

from __future__ import annotations

from functools import lru_cache

from .database import AnswerSet, eval_utq, from_abox, holds_tq
from .ontology import (
    Axiom,
    ConceptName,
    Ontology,
    classical_version,
    cut,
    degree_set,
)
from .queries import ConjunctiveQuery, ThresholdAtom, ThresholdQuery, Var
from .rewriting import perfect_ref
from .tnorms import ONE, ZERO, TNorm, to_degree


class UnsupportedSemantics(Exception):
    """The requested operation has no known procedure under this t-norm."""


class ConsistencyAssumptionRequired(UnsupportedSemantics):
    """Łukasiewicz answering needs the caller to vouch for consistency."""


class InconsistentOntology(Exception):
    pass


def _require(k: TNorm, allowed, what: str):
    if k not in allowed:
        names = " or ".join(t.value for t in allowed)
        raise UnsupportedSemantics(f"{what} is only available under {names}, not {k.value}")


def _concept_atom(b, x: Var, fresh: str) -> ThresholdAtom:
    if isinstance(b, ConceptName):
        return ThresholdAtom(b.name, (x,), ONE)
    other = Var(fresh)
    terms = (other, x) if b.role.inverse else (x, other)
    return ThresholdAtom(b.role.name, terms, ONE)


def _role_atom(q, x: Var, y: Var) -> ThresholdAtom:
    return ThresholdAtom(q.name, (y, x) if q.inverse else (x, y), ONE)


def violation_query(ax: Axiom) -> ThresholdQuery:
    """Boolean query matching exactly the elements violating negative axiom *ax* classically."""
    x, y = Var("x"), Var("y")
    if ax.is_role:
        atoms = (_role_atom(ax.lhs, x, y), _role_atom(ax.target, x, y))
    else:
        atoms = (_concept_atom(ax.lhs, x, "_1"), _concept_atom(ax.target, x, "_2"))
    return ThresholdQuery((), atoms)


@lru_cache(maxsize=4096)
def _rewrite(q: ThresholdQuery, tbox: tuple, k: TNorm):
    return perfect_ref(q, tbox, k)


def _classically_consistent(o: Ontology) -> bool:
    flat = classical_version(o)
    db = from_abox(flat.abox)
    for ax in flat.tbox:
        if ax.negative:
            if holds_any(db, _rewrite(violation_query(ax), flat.tbox, TNorm.GODEL)):
                return False
    return True


def holds_any(db, u) -> bool:
    return any(holds_tq(db, q, ()) for q in u)


def check_consistency(o: Ontology, k: TNorm) -> bool:
    """Decide consistency through the classical version (Gödel and product only)."""
    _require(k, (TNorm.GODEL, TNorm.PRODUCT), "consistency checking")
    return _classically_consistent(o)


def _ensure_consistent(o: Ontology, k: TNorm = TNorm.GODEL):
    if not check_consistency(o, k):
        raise InconsistentOntology("the ontology is inconsistent")


def cq_to_tq(q: ConjunctiveQuery, d) -> ThresholdQuery:
    """Same atoms, each required to hold to at least *d*."""
    d = to_degree(d)
    if d <= ZERO:
        raise ValueError("the degree must be positive")
    atoms = tuple(ThresholdAtom(a.predicate, a.terms, d) for a in q.atoms)
    return ThresholdQuery(q.head, atoms, q.name)


def _classical_answers(o: Ontology, q: ConjunctiveQuery) -> AnswerSet:
    flat = classical_version(o)
    u = _rewrite(cq_to_tq(q, ONE), flat.tbox, TNorm.GODEL)
    return eval_utq(from_abox(flat.abox), u)


def _at_least(o: Ontology, q: ConjunctiveQuery, theta) -> AnswerSet:
    return _classical_answers(cut(o, theta), q)


def answer_at_least(o: Ontology, q: ConjunctiveQuery, theta) -> AnswerSet:
    """Tuples whose degree for *q* is at least θ in every model (Gödel)."""
    theta = to_degree(theta)
    if theta <= ZERO:
        raise ValueError("θ must be positive")
    _ensure_consistent(o)
    return _at_least(o, q, theta)


def degree_of(o: Ontology, q: ConjunctiveQuery, a: tuple, search: str = "linear"):
    """Exact degree of the answer *a* to *q* (Gödel); 0 when it is no answer.

    ``search="linear"`` walks the ontology's degrees downwards; ``"binary"``
    bisects them instead, relying on answers shrinking as θ grows.
    """
    _ensure_consistent(o)
    a = tuple(a)
    if len(a) != len(q.head):
        raise ValueError(f"expected a {len(q.head)}-tuple, got {len(a)} values")
    levels = degree_set(o)
    if search == "linear":
        for d in reversed(levels):
            if a in _at_least(o, q, d):
                return d
        return ZERO
    if search != "binary":
        raise ValueError(f"unknown search strategy {search!r}")
    lo, hi, best = 0, len(levels) - 1, ZERO
    while lo <= hi:
        mid = (lo + hi) // 2
        if a in _at_least(o, q, levels[mid]):
            best, lo = levels[mid], mid + 1
        else:
            hi = mid - 1
    return best


def top_k(o: Ontology, q: ConjunctiveQuery, kk: int) -> AnswerSet:
    """The *kk* best answers with their degrees (Gödel).

    Levels are visited from the highest degree down; the degree of a tuple is
    the first level at which it appears. Ties are broken lexicographically.
    """
    if kk < 1:
        raise ValueError("k must be a positive integer")
    _ensure_consistent(o)
    found = {}
    for d in reversed(degree_set(o)):
        for t in _at_least(o, q, d).tuples():
            found.setdefault(t, d)
        if len(found) >= kk:
            break
    ranked = AnswerSet.with_degrees(found.items())
    return AnswerSet(ranked.rows[:kk], True)


def answer_threshold(o: Ontology, q: ThresholdQuery, k: TNorm,
                     assume_consistent: bool = False) -> AnswerSet:
    """Certain answers of a threshold query via rewriting.

    Under Łukasiewicz consistency cannot be decided, so the caller must pass
    ``assume_consistent=True``; the answers are only meaningful if it holds.
    """
    if k is TNorm.LUKASIEWICZ:
        if not assume_consistent:
            raise ConsistencyAssumptionRequired(
                "threshold answering under lukasiewicz needs an explicit consistency assumption")
    else:
        _ensure_consistent(o, k)
    return eval_utq(from_abox(o.abox), _rewrite(q, o.tbox, k))


def positive_answers(o: Ontology, q: ConjunctiveQuery, k: TNorm) -> AnswerSet:
    """Tuples with a strictly positive degree in every model (Gödel, product)."""
    _require(k, (TNorm.GODEL, TNorm.PRODUCT), "positive answering")
    _ensure_consistent(o, k)
    return _classical_answers(o, q)


def answer_request(o: Ontology, q, mode: str, k: TNorm = TNorm.GODEL,
                   value=None, assume_consistent: bool = False) -> AnswerSet:
    """Dispatch one request; *mode* is at_least, degree_of, top_k, threshold or positive."""
    cq_modes = {"at_least", "degree_of", "top_k", "positive"}
    if mode in cq_modes and not isinstance(q, ConjunctiveQuery):
        raise ValueError(f"mode {mode} takes a conjunctive query")
    if mode == "threshold" and not isinstance(q, ThresholdQuery):
        raise ValueError("mode threshold takes a threshold query")
    if mode in ("at_least", "degree_of", "top_k"):
        _require(k, (TNorm.GODEL,), "degree query answering")
    if mode == "at_least":
        return answer_at_least(o, q, value)
    if mode == "degree_of":
        a = tuple(value)
        return AnswerSet.with_degrees([(a, degree_of(o, q, a))])
    if mode == "top_k":
        return top_k(o, q, int(value))
    if mode == "threshold":
        return answer_threshold(o, q, k, assume_consistent)
    if mode == "positive":
        return positive_answers(o, q, k)
    raise ValueError(f"unknown mode {mode!r}")
