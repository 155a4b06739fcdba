"""Fuzzy DL-Lite_R ontologies and their structural transformations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .tnorms import ONE, ZERO

RESERVED_PREFIX = "__norm"


@dataclass(frozen=True, order=True)
class Role:
    """A basic role: a role name, possibly inverted."""

    name: str
    inverse: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("role name must be nonempty")

    def inv(self) -> "Role":
        return Role(self.name, not self.inverse)

    def __str__(self):
        return f"{self.name}-" if self.inverse else self.name


@dataclass(frozen=True, order=True)
class ConceptName:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("concept name must be nonempty")

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Exists:
    """Unqualified existential restriction over a basic role."""

    role: Role

    def __str__(self):
        return f"EX {self.role}"


BasicConcept = Union[ConceptName, Exists]


@dataclass(frozen=True)
class Not:
    """Negation of a basic concept or a basic role (right-hand sides only)."""

    arg: Union[ConceptName, Exists, Role]

    def __post_init__(self):
        if isinstance(self.arg, Not):
            raise ValueError("negation applies only to basic concepts and roles")

    def __str__(self):
        return f"NOT {self.arg}"


def _check_degree(d):
    # 0 is representable so that loaders can drop it; Ontology refuses it
    if not ZERO <= d <= ONE:
        raise ValueError(f"degree must lie in [0, 1], got {d}")


def _strip(x):
    return x.arg if isinstance(x, Not) else x


@dataclass(frozen=True)
class Axiom:
    """A graded inclusion ``<lhs ⊑ rhs, degree>`` between concepts or roles."""

    lhs: Union[ConceptName, Exists, Role]
    rhs: Union[ConceptName, Exists, Role, Not]
    degree: Fraction = ONE

    def __post_init__(self):
        if isinstance(self.lhs, Not):
            raise ValueError("negation cannot occur on the left-hand side")
        _check_degree(self.degree)
        lhs_role = isinstance(self.lhs, Role)
        rhs_role = isinstance(_strip(self.rhs), Role)
        if lhs_role != rhs_role:
            raise ValueError("an inclusion relates two concepts or two roles")

    @property
    def is_role(self) -> bool:
        return isinstance(self.lhs, Role)

    @property
    def negative(self) -> bool:
        return isinstance(self.rhs, Not)

    @property
    def target(self):
        """Right-hand side with any negation removed."""
        return _strip(self.rhs)

    def with_degree(self, degree: Fraction) -> "Axiom":
        return Axiom(self.lhs, self.rhs, degree)

    def __str__(self):
        return f"<{self.lhs} ⊑ {self.rhs}, {self.degree}>"


@dataclass(frozen=True)
class ConceptAssertion:
    concept: BasicConcept
    individual: str
    degree: Fraction = ONE

    def __post_init__(self):
        if not isinstance(self.concept, (ConceptName, Exists)):
            raise ValueError("concept assertions take basic concepts only")
        _check_degree(self.degree)

    def with_degree(self, degree: Fraction) -> "ConceptAssertion":
        return ConceptAssertion(self.concept, self.individual, degree)


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str
    degree: Fraction = ONE

    def __post_init__(self):
        _check_degree(self.degree)

    def with_degree(self, degree: Fraction) -> "RoleAssertion":
        return RoleAssertion(self.role, self.subject, self.object, degree)


Assertion = Union[ConceptAssertion, RoleAssertion]
Statement = Union[Axiom, ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class Signature:
    concepts: frozenset
    roles: frozenset
    individuals: frozenset

    def names(self) -> frozenset:
        return self.concepts | self.roles | self.individuals


def _concept_names(x, out: set, roles: set):
    x = _strip(x)
    if isinstance(x, ConceptName):
        out.add(x.name)
    elif isinstance(x, Exists):
        roles.add(x.role.name)
    elif isinstance(x, Role):
        roles.add(x.name)


def _dedupe(items):
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True, eq=False)
class Ontology:
    """A TBox of graded axioms plus an ABox of graded assertions.

    Statement order is kept for deterministic processing; equality ignores it.
    """

    tbox: tuple = ()
    abox: tuple = ()
    signature: Signature = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "tbox", _dedupe(self.tbox))
        object.__setattr__(self, "abox", _dedupe(self.abox))
        for st in self.tbox + self.abox:
            if getattr(st, "degree", None) == ZERO:
                raise ValueError(f"degree-0 statement {st} is vacuous; use make_ontology to drop it")
        concepts, roles, individuals = set(), set(), set()
        for ax in self.tbox:
            if not isinstance(ax, Axiom):
                raise TypeError(f"not an axiom: {ax!r}")
            _concept_names(ax.lhs, concepts, roles)
            _concept_names(ax.rhs, concepts, roles)
        for st in self.abox:
            if isinstance(st, ConceptAssertion):
                _concept_names(st.concept, concepts, roles)
                individuals.add(st.individual)
            elif isinstance(st, RoleAssertion):
                roles.add(st.role)
                individuals.update((st.subject, st.object))
            else:
                raise TypeError(f"not an assertion: {st!r}")
        clash = concepts & roles
        if clash:
            raise ValueError(f"names used both as concept and role: {sorted(clash)}")
        object.__setattr__(
            self, "signature",
            Signature(frozenset(concepts), frozenset(roles), frozenset(individuals)),
        )

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return set(self.tbox) == set(other.tbox) and set(self.abox) == set(other.abox)

    def __hash__(self):
        return hash((frozenset(self.tbox), frozenset(self.abox)))

    def __len__(self):
        return len(self.tbox) + len(self.abox)

    @property
    def statements(self) -> tuple:
        return self.tbox + self.abox

    @property
    def individuals(self) -> list:
        return sorted(self.signature.individuals)

    def with_statements(self, extra: Iterable[Statement]) -> "Ontology":
        tbox, abox = list(self.tbox), list(self.abox)
        for st in extra:
            (tbox if isinstance(st, Axiom) else abox).append(st)
        return Ontology(tuple(tbox), tuple(abox))

    def is_normalized(self) -> bool:
        return not any(_exists_to_exists(ax) for ax in self.tbox)


def make_ontology(statements: Iterable[Statement]) -> Ontology:
    """Build an ontology, dropping degree-0 statements with a warning."""
    tbox, abox = [], []
    for st in statements:
        if st.degree == ZERO:
            warnings.warn(f"dropping vacuous degree-0 statement {st}", stacklevel=2)
            continue
        (tbox if isinstance(st, Axiom) else abox).append(st)
    return Ontology(tuple(tbox), tuple(abox))


def _exists_to_exists(ax: Axiom) -> bool:
    return isinstance(ax.lhs, Exists) and isinstance(ax.rhs, Exists)


def normalize(o: Ontology) -> Ontology:
    """Split every ``<∃Q1 ⊑ ∃Q2, d>`` through a fresh concept name.

    The result holds ``<∃Q1 ⊑ X, 1>`` and ``<X ⊑ ∃Q2, d>`` instead; fresh names
    carry the reserved ``__norm`` prefix.
    """
    if o.is_normalized():
        return o
    used = o.signature.names()
    counter = 0
    tbox = []
    for ax in o.tbox:
        if not _exists_to_exists(ax):
            tbox.append(ax)
            continue
        while f"{RESERVED_PREFIX}{counter}" in used:
            counter += 1
        fresh = ConceptName(f"{RESERVED_PREFIX}{counter}")
        counter += 1
        tbox.append(Axiom(ax.lhs, fresh, ONE))
        tbox.append(Axiom(fresh, ax.rhs, ax.degree))
    return Ontology(tuple(tbox), o.abox)


def classical_version(o: Ontology) -> Ontology:
    """Flatten every (positive-degree) statement to degree 1."""
    return Ontology(
        tuple(ax.with_degree(ONE) for ax in o.tbox),
        tuple(st.with_degree(ONE) for st in o.abox),
    )


def cut(o: Ontology, theta: Fraction) -> Ontology:
    """The θ-cut: keep exactly the statements holding to degree ≥ θ."""
    if theta <= ZERO:
        raise ValueError("cut threshold must be positive")
    return Ontology(
        tuple(ax for ax in o.tbox if ax.degree >= theta),
        tuple(st for st in o.abox if st.degree >= theta),
    )


def degree_set(o: Ontology) -> list:
    """Distinct degrees occurring in *o*, increasing, always ending in 1."""
    return sorted({st.degree for st in o.statements} | {ONE})

