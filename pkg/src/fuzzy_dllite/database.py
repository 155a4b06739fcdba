"""The ABox read as a database, and query evaluation over it."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .ontology import ConceptAssertion, Exists, RoleAssertion
from .queries import Ind, Var
from .tnorms import ONE, ZERO, TNorm, conj_fold


@dataclass(frozen=True, order=True)
class Null:
    """A labelled null standing for the witness of an existential assertion."""

    index: int

    def __str__(self):
        return f"_:{self.index}"


class AboxDatabase:
    """Concept rows ``(A, a, d)`` and role rows ``(P, a, b, d)``, one per key."""

    def __init__(self):
        self._rows = defaultdict(dict)       # predicate -> {terms: degree}
        self._by_pos = defaultdict(list)     # (predicate, position, value) -> [terms]
        self._nulls = 0

    @classmethod
    def from_abox(cls, abox) -> "AboxDatabase":
        db = cls()
        merged = {}
        for st in abox:
            if isinstance(st, ConceptAssertion):
                key = (st.concept, st.individual)
            elif isinstance(st, RoleAssertion):
                key = (st.role, st.subject, st.object)
            else:
                raise TypeError(f"not an assertion: {st!r}")
            if st.degree > merged.get(key, (None, ZERO))[1]:
                merged[key] = (st, st.degree)
        for st, d in merged.values():
            if isinstance(st, RoleAssertion):
                db._put(st.role, (st.subject, st.object), d)
            elif isinstance(st.concept, Exists):
                role = st.concept.role
                n = Null(db._nulls)
                db._nulls += 1
                pair = (n, st.individual) if role.inverse else (st.individual, n)
                db._put(role.name, pair, d)
            else:
                db._put(st.concept.name, (st.individual,), d)
        return db

    def _put(self, pred, terms, d):
        table = self._rows[pred]
        if terms not in table:
            for pos, v in enumerate(terms):
                self._by_pos[(pred, pos, v)].append(terms)
        if d > table.get(terms, ZERO):
            table[terms] = d

    def __len__(self):
        return sum(len(t) for t in self._rows.values())

    def rows(self):
        """Yield ``(predicate, terms, degree)`` for every row."""
        for pred, table in self._rows.items():
            for terms, d in table.items():
                yield pred, terms, d

    def degree(self, pred, terms):
        return self._rows.get(pred, {}).get(tuple(terms), ZERO)

    def candidates(self, pred, arity, fixed: dict):
        """Rows of *pred* agreeing with the ``{position: value}`` constraints."""
        table = self._rows.get(pred)
        if not table:
            return []
        if not fixed:
            pool = table.keys()
        else:
            pool = min((self._by_pos.get((pred, p, v), []) for p, v in fixed.items()), key=len)
        return [(t, table[t]) for t in pool
                if len(t) == arity and all(t[p] == v for p, v in fixed.items())]

    @property
    def individuals(self) -> set:
        return {v for _, terms, _ in self.rows() for v in terms if not isinstance(v, Null)}


def from_abox(abox) -> AboxDatabase:
    return AboxDatabase.from_abox(abox)


@dataclass(frozen=True)
class AnswerSet:
    """Answer tuples, optionally with degrees.

    ``rows`` is ordered: by degree descending when degrees are present, then
    lexicographically by tuple.
    """

    rows: tuple
    graded: bool = False

    @classmethod
    def of(cls, tuples) -> "AnswerSet":
        return cls(tuple((t, None) for t in sorted(set(tuples))), False)

    @classmethod
    def with_degrees(cls, pairs) -> "AnswerSet":
        ordered = sorted(pairs, key=lambda p: (-p[1], p[0]))
        return cls(tuple(ordered), True)

    def tuples(self) -> set:
        return {t for t, _ in self.rows}

    def degrees(self) -> dict:
        return {t: d for t, d in self.rows}

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, t):
        return tuple(t) in self.tuples()


def _resolve(t, binding):
    if isinstance(t, Ind):
        return t.name
    return binding.get(t)


def _matches(db: AboxDatabase, atoms, binding, bounds: bool):
    """Backtracking join; yields (binding, degrees in atom order)."""
    atoms = list(atoms)
    degrees = [None] * len(atoms)

    def pick(remaining, b):
        best, best_n = None, None
        for idx in remaining:
            a = atoms[idx]
            fixed = {p: _resolve(t, b) for p, t in enumerate(a.terms) if _resolve(t, b) is not None}
            cands = db.candidates(a.predicate, len(a.terms), fixed)
            if bounds:
                cands = [(r, d) for r, d in cands if d >= a.bound]
            if best is None or len(cands) < best_n:
                best, best_n, best_c = idx, len(cands), cands
                if best_n == 0:
                    break
        return best, best_c

    def go(remaining, b):
        if not remaining:
            yield b, list(degrees)
            return
        idx, cands = pick(remaining, b)
        rest = [r for r in remaining if r != idx]
        a = atoms[idx]
        for row, d in cands:
            b2 = dict(b)
            ok = True
            for t, v in zip(a.terms, row):
                if isinstance(t, Var) and b2.setdefault(t, v) != v:
                    ok = False
                    break
            if ok:
                degrees[idx] = d
                yield from go(rest, b2)

    yield from go(list(range(len(atoms))), dict(binding))


def _head_values(q, b) -> Optional[tuple]:
    vals = tuple(_resolve(t, b) for t in q.head)
    if any(v is None or isinstance(v, Null) for v in vals):
        return None
    return vals


def _bind_head(q, a):
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


def eval_tq(db: AboxDatabase, q) -> AnswerSet:
    """Answers of one threshold query: each atom must match a row at or above its bound."""
    out = set()
    for b, _ in _matches(db, q.atoms, {}, bounds=True):
        t = _head_values(q, b)
        if t is not None:
            out.add(t)
    return AnswerSet.of(out)


def holds_tq(db: AboxDatabase, q, a: tuple) -> bool:
    b = _bind_head(q, tuple(a))
    if b is None:
        return False
    return next(_matches(db, q.atoms, b, bounds=True), None) is not None


def eval_utq(db: AboxDatabase, u) -> AnswerSet:
    out = set()
    for q in u:
        out |= eval_tq(db, q).tuples()
    return AnswerSet.of(out)


def eval_cq_degree(db: AboxDatabase, q, a: tuple, k: TNorm):
    """Best t-norm-aggregated row degree over matches of *q* with head bound to *a*."""
    b = _bind_head(q, tuple(a))
    if b is None:
        return ZERO
    best = ZERO
    for _, ds in _matches(db, q.atoms, b, bounds=False):
        best = max(best, conj_fold(k, ds))
        if best == ONE:
            break
    return best
