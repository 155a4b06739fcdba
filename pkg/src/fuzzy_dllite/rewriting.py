"""Threshold-query rewriting (a graded PerfectRef).

A threshold query is rewritten against the positive axioms of a TBox into a
union of threshold queries whose answers over the ABox, read as a plain
database, are the certain answers of the original query.

Terms are unbound when they are variables outside the head that occur once;
after every step queries are put in a canonical form in which exactly those
variables carry ``_``-names, so applicability can be read off a single atom.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import permutations, product
from typing import Iterable

from .ontology import Axiom, ConceptName, Exists, Role
from .queries import Ind, ThresholdAtom, ThresholdQuery, UnionTQ, Var
from .tnorms import ONE, TNorm

MAX_PERMUTATIONS = 5040


def transfer(k: TNorm, d, e):
    """Bound needed on the body of an axiom of degree *e* to reach *d* on its head."""
    if k is TNorm.GODEL:
        return d
    if k is TNorm.PRODUCT:
        return d / e
    return d + ONE - e


def _unbound(t) -> bool:
    return isinstance(t, Var) and t.anonymous


def applicable(ax: Axiom, atom: ThresholdAtom, k: TNorm) -> bool:
    """Whether *ax* can be applied backwards to *atom*.

    Anonymous variables in *atom* (names starting with ``_``) are read as
    unbound. Every case requires the atom's bound to be at most the axiom's
    degree, so the transferred bound never exceeds 1.
    """
    if ax.negative or atom.bound > ax.degree:
        return False
    target = ax.rhs
    if len(atom.terms) == 1:
        return not ax.is_role and isinstance(target, ConceptName) and target.name == atom.predicate
    if ax.is_role:
        return target.name == atom.predicate
    if not isinstance(target, Exists) or target.role.name != atom.predicate:
        return False
    t1, t2 = atom.terms
    return _unbound(t1) if target.role.inverse else _unbound(t2)


def _fresh_anon(atom_terms: Iterable) -> Var:
    used = {t.name for t in atom_terms if isinstance(t, Var)}
    n = 1
    while f"_{n}" in used:
        n += 1
    return Var(f"_{n}")


def _atom_for(b, t, bound, avoid) -> ThresholdAtom:
    """The atom expressing membership of term *t* in basic concept *b*."""
    if isinstance(b, ConceptName):
        return ThresholdAtom(b.name, (t,), bound)
    anon = _fresh_anon(avoid)
    terms = (anon, t) if b.role.inverse else (t, anon)
    return ThresholdAtom(b.role.name, terms, bound)


def gr(atom: ThresholdAtom, ax: Axiom, k: TNorm, avoid: Iterable = ()) -> ThresholdAtom:
    """Result of applying *ax* backwards to *atom*.

    *avoid* lists terms already in use, so a newly introduced unbound
    variable gets a fresh name.
    """
    if not applicable(ax, atom, k):
        raise ValueError(f"axiom {ax} is not applicable to {atom}")
    d = transfer(k, atom.bound, ax.degree)
    avoid = list(avoid) + list(atom.terms)
    if len(atom.terms) == 1:
        return _atom_for(ax.lhs, atom.terms[0], d, avoid)
    t1, t2 = atom.terms
    if ax.is_role:
        lhs: Role = ax.lhs
        flipped = lhs.inverse != ax.rhs.inverse
        return ThresholdAtom(lhs.name, (t2, t1) if flipped else (t1, t2), d)
    keep = t2 if ax.rhs.role.inverse else t1
    return _atom_for(ax.lhs, keep, d, avoid)


# unification -----------------------------------------------------------------

def _walk(s, t):
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def mgu(a1, a2, head=()):
    """Most general unifier of two atoms' term lists, or ``None``.

    Individuals win over variables, and head variables over other variables,
    so answer variables keep their names wherever possible.
    """
    if a1.predicate != a2.predicate or len(a1.terms) != len(a2.terms):
        return None
    head_pos = {}
    for i, t in enumerate(head):
        head_pos.setdefault(t, i)

    def rank(t):
        if isinstance(t, Ind):
            return (0, 0)
        if t in head_pos:
            return (1, head_pos[t])
        return (2 if not t.anonymous else 3, 0)

    s = {}
    for x, y in zip(a1.terms, a2.terms):
        x, y = _walk(s, x), _walk(s, y)
        if x == y:
            continue
        if isinstance(x, Ind) and isinstance(y, Ind):
            return None
        keep, drop = sorted((x, y), key=rank)
        s[drop] = keep
    return {v: _walk(s, v) for v in s}


def _merge_atoms(atoms):
    best = {}
    for a in atoms:
        key = (a.predicate, a.terms)
        if key not in best or a.bound > best[key].bound:
            best[key] = a
    return list(best.values())


def reduce(q: ThresholdQuery, g1: ThresholdAtom, g2: ThresholdAtom) -> ThresholdQuery:
    """Apply the mgu of *g1* and *g2* to *q*; atoms that coincide keep the larger bound."""
    s = mgu(g1, g2, q.head)
    if s is None:
        raise ValueError(f"{g1} and {g2} do not unify")
    head = tuple(s.get(t, t) for t in q.head)
    atoms = _merge_atoms(a.substitute(s) for a in q.atoms)
    return ThresholdQuery(head, tuple(atoms), q.name)


# canonical form ----------------------------------------------------------------

def canonicalize(q: ThresholdQuery) -> ThresholdQuery:
    """Rename and reorder *q* so that equivalent variants become equal.

    Head variables keep their names. Variables occurring once outside the head
    become ``_1, _2, ...``; the other non-head variables become ``y1, y2, ...``
    (skipping head names). Atoms are sorted, and ties between atoms that look
    alike are broken by trying their orderings.
    """
    atoms = _merge_atoms(q.atoms)
    head_pos = {}
    for i, t in enumerate(q.head):
        if isinstance(t, Var):
            head_pos.setdefault(t, i)
    occ = Counter(t for a in atoms for t in a.terms if isinstance(t, Var))

    def sig_term(t):
        if isinstance(t, Ind):
            return (1, t.name)
        if t in head_pos:
            return (0, str(head_pos[t]))
        if occ[t] == 1:
            return (2, "")
        return (3, "")

    def sig(a):
        return (a.predicate, len(a.terms), tuple(sig_term(t) for t in a.terms), a.bound)

    atoms.sort(key=sig)
    groups = []
    for a in atoms:
        if groups and sig(groups[-1][0]) == sig(a):
            groups[-1].append(a)
        else:
            groups.append([a])
    n_orders = math.prod(math.factorial(len(g)) for g in groups)
    if n_orders <= MAX_PERMUTATIONS:
        orderings = (sum(map(list, combo), []) for combo in product(*(permutations(g) for g in groups)))
    else:
        orderings = iter([atoms])

    head_names = {t.name for t in head_pos}

    def label(order):
        names, shared = {}, 0
        anon = 0
        out = []
        for a in order:
            terms = []
            for t in a.terms:
                if isinstance(t, Ind) or t in head_pos:
                    terms.append(t)
                    continue
                if t not in names:
                    if occ[t] == 1:
                        anon += 1
                        names[t] = Var(f"_{anon}")
                    else:
                        shared += 1
                        while f"y{shared}" in head_names:
                            shared += 1
                        names[t] = Var(f"y{shared}")
                terms.append(names[t])
            out.append(ThresholdAtom(a.predicate, tuple(terms), a.bound))
        return out

    def key(labeled):
        return tuple((a.predicate, tuple((type(t).__name__, t.name) for t in a.terms), a.bound)
                     for a in labeled)

    best = min((label(o) for o in orderings), key=key)
    return ThresholdQuery(q.head, tuple(best), q.name)


def _positive(tbox):
    return [ax for ax in tbox if not ax.negative]


def _one_step(p: ThresholdQuery, axioms, k: TNorm):
    for i, g in enumerate(p.atoms):
        avoid = [t for a in p.atoms for t in a.terms]
        for ax in axioms:
            if applicable(ax, g, k):
                atoms = list(p.atoms)
                atoms[i] = gr(g, ax, k, avoid)
                yield ThresholdQuery(p.head, tuple(atoms), p.name)
    for i in range(len(p.atoms)):
        for j in range(i + 1, len(p.atoms)):
            g1, g2 = p.atoms[i], p.atoms[j]
            if mgu(g1, g2, p.head) is not None:
                yield reduce(p, g1, g2)


def perfect_ref(q: ThresholdQuery, tbox, k: TNorm) -> UnionTQ:
    """Union of threshold queries equivalent to *q* under *tbox*.

    The input query is always the first member, unchanged; the others are in
    canonical form and pairwise distinct.
    """
    axioms = _positive(tbox)
    start = canonicalize(q)
    seen = {start: None}
    work = [start]
    while work:
        p = work.pop()
        for new in _one_step(p, axioms, k):
            c = canonicalize(new)
            if c not in seen:
                seen[c] = None
                work.append(c)
    rest = [c for c in seen if c != start]
    rest.sort(key=lambda c: (len(c.atoms), str(c)))
    return UnionTQ((q, *rest))
