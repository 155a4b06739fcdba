"""Conjunctive and threshold queries."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Union

from .tnorms import ONE, ZERO, format_degree, to_degree


@dataclass(frozen=True, order=True)
class Var:
    """A query variable.

    Names starting with ``_`` are reserved for anonymous (``_``) variables.
    """

    name: str

    @property
    def anonymous(self) -> bool:
        return self.name.startswith("_")

    def __str__(self):
        return "_" if self.anonymous else self.name


@dataclass(frozen=True, order=True)
class Ind:
    """An individual name used as a query term."""

    name: str

    def __str__(self):
        q = '"' if "'" in self.name else "'"
        return f"{q}{self.name}{q}"


Term = Union[Var, Ind]


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: tuple

    def __post_init__(self):
        if len(self.terms) not in (1, 2):
            raise ValueError("atoms take one or two terms")

    @property
    def is_role(self) -> bool:
        return len(self.terms) == 2

    def substitute(self, subst) -> "Atom":
        return Atom(self.predicate, tuple(subst.get(t, t) for t in self.terms))

    def __str__(self):
        return f"{self.predicate}({', '.join(map(str, self.terms))})"


@dataclass(frozen=True)
class ThresholdAtom:
    """An atom that must hold to at least ``bound``."""

    predicate: str
    terms: tuple
    bound: Fraction

    def __post_init__(self):
        if len(self.terms) not in (1, 2):
            raise ValueError("atoms take one or two terms")
        if not ZERO < self.bound <= ONE:
            raise ValueError(f"threshold must lie in (0, 1], got {self.bound}")

    @property
    def is_role(self) -> bool:
        return len(self.terms) == 2

    @property
    def atom(self) -> Atom:
        return Atom(self.predicate, self.terms)

    def substitute(self, subst) -> "ThresholdAtom":
        return ThresholdAtom(
            self.predicate, tuple(subst.get(t, t) for t in self.terms), self.bound
        )

    def __str__(self):
        return f"{self.atom} >= {format_degree(self.bound)}"


def _check_head(head, atoms):
    body_vars = {t for a in atoms for t in a.terms if isinstance(t, Var)}
    for t in head:
        if not isinstance(t, (Var, Ind)):
            raise TypeError(f"bad head term {t!r}")
        if isinstance(t, Var):
            if t.anonymous:
                raise ValueError("anonymous variables cannot be answer variables")
            if t not in body_vars:
                raise ValueError(f"answer variable {t.name} does not occur in the body")


class _QueryMixin:
    head: tuple
    atoms: tuple

    @property
    def answer_vars(self) -> tuple:
        return tuple(dict.fromkeys(t for t in self.head if isinstance(t, Var)))

    @property
    def arity(self) -> int:
        return len(self.head)

    def variables(self) -> set:
        return {t for a in self.atoms for t in a.terms if isinstance(t, Var)}

    def occurrences(self) -> Counter:
        return Counter(t for a in self.atoms for t in a.terms if isinstance(t, Var))

    def unbound(self, term) -> bool:
        """True for a variable that is neither an answer variable nor shared."""
        if not isinstance(term, Var) or term in self.head:
            return False
        return self.occurrences()[term] <= 1


@dataclass(frozen=True)
class ConjunctiveQuery(_QueryMixin):
    """``q(head) :- atoms``; variables outside the head are existential."""

    head: tuple
    atoms: tuple
    name: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        _check_head(self.head, self.atoms)

    def __str__(self):
        body = ", ".join(map(str, self.atoms))
        return f"{self.name}({', '.join(map(str, self.head))}) :- {body}."


@dataclass(frozen=True)
class ThresholdQuery(_QueryMixin):
    """A conjunction of threshold atoms with answer terms ``head``."""

    head: tuple
    atoms: tuple
    name: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        _check_head(self.head, self.atoms)

    def __str__(self):
        body = ", ".join(map(str, self.atoms))
        return f"{self.name}({', '.join(map(str, self.head))}) :- {body}."


@dataclass(frozen=True)
class UnionTQ:
    """A nonempty union of threshold queries of equal arity."""

    queries: tuple

    def __post_init__(self):
        object.__setattr__(self, "queries", tuple(self.queries))
        if not self.queries:
            raise ValueError("a union of threshold queries must be nonempty")
        if len({q.arity for q in self.queries}) != 1:
            raise ValueError("all queries in a union need the same arity")

    def __iter__(self):
        return iter(self.queries)

    def __len__(self):
        return len(self.queries)

    def __contains__(self, q):
        return q in self.queries

    @property
    def arity(self) -> int:
        return self.queries[0].arity


def cq(head: Iterable, atoms: Iterable, name: str = "q") -> ConjunctiveQuery:
    """Shorthand builder: strings in terms are variables, ``'a'``-quoted are individuals."""
    fresh = count(1)
    return ConjunctiveQuery(tuple(_term(t, fresh) for t in head),
                            tuple(Atom(p, tuple(_term(t, fresh) for t in ts)) for p, *ts in atoms),
                            name)


def tq(head: Iterable, atoms: Iterable, name: str = "q") -> ThresholdQuery:
    """Like :func:`cq`; each atom tuple ends with its bound."""
    fresh = count(1)
    built = []
    for p, *rest in atoms:
        *ts, bound = rest
        built.append(ThresholdAtom(p, tuple(_term(t, fresh) for t in ts), to_degree(bound)))
    return ThresholdQuery(tuple(_term(t, fresh) for t in head), tuple(built), name)


def _term(t, fresh):
    if isinstance(t, (Var, Ind)):
        return t
    if t == "_":
        return Var(f"_{next(fresh)}")
    if len(t) >= 2 and t[0] == t[-1] and t[0] in "'\"":
        return Ind(t[1:-1])
    return Var(t)
