"""Budgeted canonical interpretation, model checking, and oracle query evaluation.

The canonical interpretation is built by applying the completion rules R1-R8
until nothing changes. Rules that create fresh elements (R4/R5, and the
existential ABox assertions) only run once everything else has saturated, and
the number of fresh elements is capped by a budget. Whether the cap was ever
hit is reported alongside the result.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .ontology import (
    Axiom,
    ConceptAssertion,
    ConceptName,
    Exists,
    Not,
    Ontology,
    Role,
    RoleAssertion,
    degree_set,
    normalize,
)
from .queries import Ind
from .tnorms import ONE, ZERO, TNorm, conj, conj_fold, neg, resid


@dataclass(frozen=True, order=True)
class Anon:
    """An anonymous domain element introduced by an existential rule."""

    index: int

    def __str__(self):
        return f"_n:{self.index}"


def element_key(e):
    """Sort key placing named individuals (by name) before anonymous elements."""
    return (1, e.index, "") if isinstance(e, Anon) else (0, 0, e)


class FuzzyInterpretation:
    """A finite fuzzy structure; absent entries have degree 0."""

    def __init__(self):
        self._domain = {}
        self._concepts = defaultdict(dict)   # A -> {elem: degree}
        self._roles = defaultdict(dict)      # P -> {(e1, e2): degree}
        self._out = defaultdict(dict)        # (P, e1) -> {e2: degree}
        self._in = defaultdict(dict)         # (P, e2) -> {e1: degree}
        self._out_max = defaultdict(dict)    # P -> {e1: max degree}
        self._in_max = defaultdict(dict)     # P -> {e2: max degree}
        self._fresh = 0

    @classmethod
    def from_maps(cls, domain=(), concepts=None, roles=None) -> "FuzzyInterpretation":
        """Build from ``{(A, e): d}`` and ``{(P, e1, e2): d}`` maps."""
        i = cls()
        for e in domain:
            i._add(e)
        for (a, e), d in (concepts or {}).items():
            i._set_concept(a, e, d)
        for (p, e1, e2), d in (roles or {}).items():
            i._set_role(Role(p), e1, e2, d)
        return i

    def copy(self) -> "FuzzyInterpretation":
        return FuzzyInterpretation.from_maps(self.domain, self.concept_map(), self.role_map())._with_fresh(self._fresh)

    def _with_fresh(self, n):
        self._fresh = n
        return self

    def _add(self, e):
        self._domain.setdefault(e, None)

    def _new_element(self) -> Anon:
        e = Anon(self._fresh)
        self._fresh += 1
        self._add(e)
        return e

    def _set_concept(self, a: str, e, d):
        if not ZERO < d <= ONE:
            raise ValueError(f"stored degrees must lie in (0, 1], got {d}")
        self._add(e)
        self._concepts[a][e] = d

    def _set_role(self, q: Role, e1, e2, d):
        if not ZERO < d <= ONE:
            raise ValueError(f"stored degrees must lie in (0, 1], got {d}")
        if q.inverse:
            e1, e2 = e2, e1
        p = q.name
        self._add(e1)
        self._add(e2)
        self._roles[p][(e1, e2)] = d
        self._out[(p, e1)][e2] = d
        self._in[(p, e2)][e1] = d
        if self._out_max[p].get(e1, ZERO) < d:
            self._out_max[p][e1] = d
        if self._in_max[p].get(e2, ZERO) < d:
            self._in_max[p][e2] = d

    @property
    def domain(self) -> list:
        return sorted(self._domain, key=element_key)

    @property
    def anonymous_count(self) -> int:
        return sum(isinstance(e, Anon) for e in self._domain)

    def concept_degree(self, a: str, e):
        return self._concepts.get(a, {}).get(e, ZERO)

    def role_degree(self, q, e1, e2):
        if isinstance(q, str):
            q = Role(q)
        if q.inverse:
            e1, e2 = e2, e1
        return self._roles.get(q.name, {}).get((e1, e2), ZERO)

    def basic_degree(self, b, e):
        """Degree of a basic concept; ``∃Q`` is the maximum over successors."""
        return self.basic_entries(b).get(e, ZERO)

    def basic_entries(self, b) -> dict:
        """Map element -> positive degree of the basic concept *b*."""
        if isinstance(b, ConceptName):
            return self._concepts.get(b.name, {})
        if isinstance(b, Exists):
            table = self._in_max if b.role.inverse else self._out_max
            return table.get(b.role.name, {})
        raise TypeError(f"not a basic concept: {b!r}")

    def role_entries(self, q: Role):
        """Yield ``((e1, e2), degree)`` for positive entries of the basic role *q*."""
        for (e1, e2), d in list(self._roles.get(q.name, {}).items()):
            yield ((e2, e1) if q.inverse else (e1, e2)), d

    def successors(self, q: Role, e) -> dict:
        if q.inverse:
            return self._in.get((q.name, e), {})
        return self._out.get((q.name, e), {})

    def concept_map(self) -> dict:
        return {(a, e): d for a, row in self._concepts.items() for e, d in row.items()}

    def role_map(self) -> dict:
        return {(p, e1, e2): d for p, row in self._roles.items() for (e1, e2), d in row.items()}

    def concept_names(self) -> list:
        return sorted(a for a, row in self._concepts.items() if row)

    def role_names(self) -> list:
        return sorted(p for p, row in self._roles.items() if row)

    def __eq__(self, other):
        if not isinstance(other, FuzzyInterpretation):
            return NotImplemented
        return (set(self._domain) == set(other._domain)
                and self.concept_map() == other.concept_map()
                and self.role_map() == other.role_map())


class TraceStep(NamedTuple):
    rule: str
    statement: object
    elements: tuple
    degree: object


class CanonicalResult(NamedTuple):
    interpretation: FuzzyInterpretation
    trace: list
    complete: bool


def default_budget(o: Ontology) -> int:
    return (len(o.tbox) + 1) * max(len(o.signature.individuals), 1) * len(degree_set(o))


def _rule_id(st) -> str:
    if isinstance(st, ConceptAssertion):
        if isinstance(st.concept, Exists):
            return "R5" if st.concept.role.inverse else "R4"
        return "R1"
    if isinstance(st, RoleAssertion):
        return "R2"
    if st.is_role:
        return "R8"
    if isinstance(st.rhs, Exists):
        return "R5" if st.rhs.role.inverse else "R4"
    if isinstance(st.lhs, Exists):
        return "R7" if st.lhs.role.inverse else "R6"
    return "R3"


def _generating(st) -> bool:
    if isinstance(st, ConceptAssertion):
        return isinstance(st.concept, Exists)
    return isinstance(st, Axiom) and not st.negative and isinstance(st.rhs, Exists)


class _Builder:
    def __init__(self, interp, k, budget, trace):
        self.i = interp
        self.k = k
        self.budget = budget
        self.trace = trace
        self.used = 0
        self.suppressed = False

    def raise_concept(self, st, a, e, v) -> bool:
        if v > self.i.concept_degree(a, e):
            self.i._set_concept(a, e, v)
            self.trace.append(TraceStep(_rule_id(st), st, (e,), v))
            return True
        return False

    def raise_role(self, st, q, e1, e2, v) -> bool:
        if v > self.i.role_degree(q, e1, e2):
            self.i._set_role(q, e1, e2, v)
            self.trace.append(TraceStep(_rule_id(st), st, (e1, e2), v))
            return True
        return False

    def apply(self, st) -> bool:
        """One round of a non-generating statement over all current entries."""
        k = self.k
        if isinstance(st, ConceptAssertion):
            return self.raise_concept(st, st.concept.name, st.individual, st.degree)
        if isinstance(st, RoleAssertion):
            return self.raise_role(st, Role(st.role), st.subject, st.object, st.degree)
        changed = False
        if st.is_role:
            for (e1, e2), v in list(self.i.role_entries(st.lhs)):
                w = conj(k, v, st.degree)
                if w > ZERO:
                    changed |= self.raise_role(st, st.rhs, e1, e2, w)
            return changed
        for e, v in list(self.i.basic_entries(st.lhs).items()):
            w = conj(k, v, st.degree)
            if w > ZERO:
                changed |= self.raise_concept(st, st.rhs.name, e, w)
        return changed

    def generate(self, st) -> bool:
        """Create fresh witnesses wherever no existing one is strong enough."""
        if isinstance(st, ConceptAssertion):
            todo = [(st.individual, st.degree)]
            q = st.concept.role
        else:
            q = st.rhs.role
            todo = [(e, conj(self.k, v, st.degree))
                    for e, v in list(self.i.basic_entries(st.lhs).items())]
        changed = False
        for e, need in todo:
            if need <= ZERO:
                continue
            if self.i.basic_degree(Exists(q), e) >= need:
                continue
            if self.used >= self.budget:
                self.suppressed = True
                continue
            self.used += 1
            fresh = self.i._new_element()
            changed |= self.raise_role(st, q, e, fresh, need)
        return changed


def build_canonical(o: Ontology, k: TNorm, budget: Optional[int] = None,
                    seed: Optional[int] = None,
                    start: Optional[FuzzyInterpretation] = None) -> CanonicalResult:
    """Least fixpoint of the completion rules, with at most *budget* fresh elements.

    ``seed`` shuffles the order in which statements are visited; ``start``
    continues from an existing interpretation instead of the empty one.
    Negative axioms play no part in the construction.
    """
    o = normalize(o)
    if budget is None:
        budget = default_budget(o)
    interp = start.copy() if start is not None else FuzzyInterpretation()
    for a in o.signature.individuals:
        interp._add(a)
    statements = [st for st in o.statements if not (isinstance(st, Axiom) and st.negative)]
    if seed is not None:
        random.Random(seed).shuffle(statements)
    plain = [st for st in statements if not _generating(st)]
    gen = [st for st in statements if _generating(st)]
    b = _Builder(interp, k, budget, [])
    while True:
        changed = True
        while changed:
            changed = False
            for st in plain:
                changed |= b.apply(st)
        grew = False
        for st in gen:
            grew |= b.generate(st)
        if not grew:
            break
    return CanonicalResult(interp, b.trace, not b.suppressed)


def build_complete(o: Ontology, k: TNorm, budget: Optional[int] = None,
                   max_budget: int = 1 << 16, seed: Optional[int] = None) -> CanonicalResult:
    """Like :func:`build_canonical`, doubling the budget until the fixpoint is reached.

    Gives up (returning an incomplete result) once *max_budget* is exceeded.
    """
    b = budget if budget is not None else default_budget(o)
    while True:
        res = build_canonical(o, k, b, seed=seed)
        if res.complete or b >= max_budget:
            return res
        b = min(2 * b, max_budget)


def _rhs_degree(i: FuzzyInterpretation, k: TNorm, rhs, *elems):
    if isinstance(rhs, Not):
        return neg(k, _rhs_degree(i, k, rhs.arg, *elems))
    if isinstance(rhs, Role):
        return i.role_degree(rhs, *elems)
    return i.basic_degree(rhs, elems[0])


def check_model(i: FuzzyInterpretation, o: Ontology, k: TNorm) -> list:
    """Statements of *o* that *i* violates; empty iff *i* is a model."""
    bad = []
    for ax in o.tbox:
        if ax.is_role:
            entries = list(i.role_entries(ax.lhs))
        else:
            entries = [((e,), v) for e, v in i.basic_entries(ax.lhs).items()]
        for elems, v in entries:
            if resid(k, v, _rhs_degree(i, k, ax.rhs, *elems)) < ax.degree:
                bad.append(ax)
                break
    for st in o.abox:
        if isinstance(st, ConceptAssertion):
            got = i.basic_degree(st.concept, st.individual)
        else:
            got = i.role_degree(st.role, st.subject, st.object)
        if got < st.degree:
            bad.append(st)
    return bad


# Oracle evaluation: deliberately plain backtracking over stored entries, kept
# independent from the database evaluator it is used to test.

def _atom_rows(i: FuzzyInterpretation, atom):
    if len(atom.terms) == 1:
        return [((e,), d) for e, d in i.basic_entries(ConceptName(atom.predicate)).items()]
    return list(i.role_entries(Role(atom.predicate)))


def _matches(i, atoms, binding):
    """Yield (binding, [degrees]) for every match of *atoms* extending *binding*."""
    if not atoms:
        yield binding, []
        return
    atom, rest = atoms[0], atoms[1:]
    for elems, d in _atom_rows(i, atom):
        b = dict(binding)
        ok = True
        for t, e in zip(atom.terms, elems):
            if isinstance(t, Ind):
                if t.name != e:
                    ok = False
                    break
            elif b.setdefault(t, e) != e:
                ok = False
                break
        if not ok:
            continue
        for b2, ds in _matches(i, rest, b):
            yield b2, [d] + ds


def _head_binding(q, a):
    if len(a) != len(q.head):
        raise ValueError(f"expected a {len(q.head)}-tuple, got {len(a)} values")
    b = {}
    for t, v in zip(q.head, a):
        if isinstance(t, Ind):
            if t.name != v:
                return None
        elif b.setdefault(t, v) != v:
            return None
    return b


def eval_cq_on(i: FuzzyInterpretation, q, a: tuple, k: TNorm):
    """Best match degree of the CQ *q* with answer terms bound to *a*."""
    b = _head_binding(q, tuple(a))
    if b is None:
        return ZERO
    best = ZERO
    for _, ds in _matches(i, list(q.atoms), b):
        best = max(best, conj_fold(k, ds))
        if best == ONE:
            break
    return best


def eval_tq_on(i: FuzzyInterpretation, q, a: tuple) -> bool:
    """Whether some match satisfies every threshold atom of *q*."""
    b = _head_binding(q, tuple(a))
    if b is None:
        return False
    for _, ds in _matches(i, list(q.atoms), b):
        if all(d >= atom.bound for d, atom in zip(ds, q.atoms)):
            return True
    return False


def _head_tuple(q, b):
    vals = tuple(t.name if isinstance(t, Ind) else b[t] for t in q.head)
    if any(isinstance(v, Anon) for v in vals):
        return None
    return vals


def tq_answers_on(i: FuzzyInterpretation, q) -> set:
    """All tuples of named individuals answering the TQ *q* in *i*."""
    out = set()
    for b, ds in _matches(i, list(q.atoms), {}):
        if all(d >= atom.bound for d, atom in zip(ds, q.atoms)):
            t = _head_tuple(q, b)
            if t is not None:
                out.add(t)
    return out


def cq_degrees_on(i: FuzzyInterpretation, q, k: TNorm) -> dict:
    """Map each named answer tuple of the CQ *q* to its positive degree in *i*."""
    out = {}
    for b, ds in _matches(i, list(q.atoms), {}):
        t = _head_tuple(q, b)
        if t is None:
            continue
        d = conj_fold(k, ds)
        if d > out.get(t, ZERO):
            out[t] = d
    return out


def existential_cycle_check(o: Ontology) -> bool:
    """True iff no fresh element can (transitively) cause another fresh element of the same kind.

    Nodes are basic concepts. ``B ⊑ B'`` adds an edge B -> B', a role
    inclusion ``Q1 ⊑ Q2`` adds ∃Q1 -> ∃Q2 and ∃Q1⁻ -> ∃Q2⁻, and every
    ``B ⊑ ∃Q`` also adds the generating edge B -> ∃Q⁻ describing the fresh
    witness. The ontology is acyclic iff no generating edge lies on a cycle.
    """
    edges = defaultdict(set)
    generating = []
    for ax in normalize(o).tbox:
        if ax.negative:
            continue
        if ax.is_role:
            edges[Exists(ax.lhs)].add(Exists(ax.rhs))
            edges[Exists(ax.lhs.inv())].add(Exists(ax.rhs.inv()))
            continue
        edges[ax.lhs].add(ax.rhs)
        if isinstance(ax.rhs, Exists):
            witness = Exists(ax.rhs.role.inv())
            edges[ax.lhs].add(witness)
            generating.append((ax.lhs, witness))

    def reaches(src, dst):
        seen, stack = {src}, [src]
        while stack:
            n = stack.pop()
            if n == dst:
                return True
            for m in edges.get(n, ()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return False

    return not any(reaches(w, b) for b, w in generating)
