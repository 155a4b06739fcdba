"""Reduction from 3-CNF satisfiability to Łukasiewicz DL-Lite_Horn consistency.

Each variable ``v`` gets two concept names, ``T_v`` (v is true) and ``F_v``
(v is false). In a model at the single ABox individual exactly one of the two
holds to degree 1 and the other to 2/3, and every clause axiom forbids all
three of its literals from sitting at 2/3.

:func:`grid_search_consistent` looks for singleton-domain models whose
degrees are multiples of a fixed step. Finding none is evidence, not proof,
that the ontology is inconsistent: real-valued models are not searched.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .syntax import KEYWORDS, SourceError, _Cursor, _degree, _individual, _name, tokenize
from .tnorms import ONE, ZERO, format_degree

BOTTOM = "BOT"
START = "A0"
INDIVIDUAL = "a"
THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


class SearchSpaceExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of clauses of exactly three ``(variable, polarity)`` literals."""

    clauses: tuple

    def __post_init__(self):
        cl = tuple(tuple((str(v), bool(p)) for v, p in c) for c in self.clauses)
        for c in cl:
            if len(c) != 3:
                raise ValueError("every clause needs exactly three literals")
        object.__setattr__(self, "clauses", cl)

    @property
    def variables(self) -> list:
        """Variables in order of first occurrence."""
        return list(dict.fromkeys(v for c in self.clauses for v, _ in c))

    def satisfied_by(self, true_vars) -> bool:
        return all(any((v in true_vars) == p for v, p in c) for c in self.clauses)

    def __str__(self):
        lit = lambda v, p: v if p else f"-{v}"
        return " & ".join("(" + " | ".join(lit(v, p) for v, p in c) + ")" for c in self.clauses)


@dataclass(frozen=True)
class HornAxiom:
    """``<B1 ⊓ ... ⊓ Bn ⊑ C1 ⊓ ... ⊓ Cm, d>``; conjuncts may repeat."""

    lhs: tuple
    rhs: tuple
    degree: Fraction

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise ValueError("conjunctions must be nonempty")
        if BOTTOM in self.lhs:
            raise ValueError("BOT may only occur on the right-hand side")
        if not ZERO < self.degree <= ONE:
            raise ValueError(f"degree must lie in (0, 1], got {self.degree}")


@dataclass(frozen=True)
class HornOntology:
    axioms: tuple = ()
    abox: tuple = ()   # (concept, individual, degree)

    @property
    def concept_names(self) -> list:
        """Names in order of first occurrence, ABox first."""
        names = dict.fromkeys(c for c, _, _ in self.abox)
        for ax in self.axioms:
            names.update(dict.fromkeys(ax.lhs + ax.rhs))
        names.pop(BOTTOM, None)
        return list(names)


def _rho(v, positive) -> str:
    return f"T_{v}" if positive else f"F_{v}"


def gen_ontology(phi: CnfFormula) -> HornOntology:
    axioms = []
    for v in phi.variables:
        for name in (_rho(v, True), _rho(v, False)):
            axioms.append(HornAxiom((name,) * 3, (name,) * 4, ONE))
        t, f = _rho(v, True), _rho(v, False)
        axioms.append(HornAxiom((t, f), (BOTTOM,), THIRD))
        axioms.append(HornAxiom((START,), (t, f), TWO_THIRDS))
    for c in phi.clauses:
        axioms.append(HornAxiom((START,), tuple(_rho(v, p) for v, p in c), THIRD))
    return HornOntology(tuple(axioms), ((START, INDIVIDUAL, ONE),))


def _conj_int(vals, idx, q):
    """Łukasiewicz conjunction on numerators over denominator *q*; ``None`` is ⊥."""
    if idx is None:
        return 0
    acc = q
    for i in idx:
        acc += vals[i] - q
        if acc <= 0:
            return 0
    return acc


def _compile(h: HornOntology, pos: dict, q: int):
    """Axioms as (lhs indices, rhs indices or None, required numerator)."""
    out = []
    for ax in h.axioms:
        rhs = None if BOTTOM in ax.rhs else tuple(pos[c] for c in ax.rhs)
        need = ax.degree * q
        out.append((tuple(pos[c] for c in ax.lhs), rhs, -(-need.numerator // need.denominator)))
    return out


def _holds(vals, ax, q) -> bool:
    lhs, rhs, need = ax
    a, b = _conj_int(vals, lhs, q), _conj_int(vals, rhs, q)
    return (q if a <= b else q - a + b) >= need


def check_point_model(m: dict, h: HornOntology) -> bool:
    """Whether the singleton interpretation ``m`` (name -> degree) is a model of *h*.

    Evaluated exactly on integer numerators over a common denominator.
    """
    for c, _, d in h.abox:
        if m.get(c, ZERO) < d:
            return False
    names = h.concept_names
    pos = {n: i for i, n in enumerate(names)}
    q = math.lcm(*(Fraction(m.get(n, ZERO)).denominator for n in names),
                 *(ax.degree.denominator for ax in h.axioms))
    vals = [int(Fraction(m.get(n, ZERO)) * q) for n in names]
    return all(_holds(vals, ax, q) for ax in _compile(h, pos, q))


def valuation_model(phi: CnfFormula, true_vars) -> dict:
    """The point model read off a propositional valuation."""
    m = {START: ONE}
    for v in phi.variables:
        m[_rho(v, True)] = ONE if v in true_vars else TWO_THIRDS
        m[_rho(v, False)] = TWO_THIRDS if v in true_vars else ONE
    return m


def brute_force_sat(phi: CnfFormula) -> Optional[frozenset]:
    """A satisfying set of true variables, or ``None``."""
    vs = phi.variables
    for bits in product((False, True), repeat=len(vs)):
        true_vars = frozenset(v for v, b in zip(vs, bits) if b)
        if phi.satisfied_by(true_vars):
            return true_vars
    return None


def grid_search_consistent(h: HornOntology, step: Fraction = Fraction(1, 6),
                           max_nodes: int = 2_000_000) -> Optional[dict]:
    """A point model with all degrees multiples of *step*, or ``None`` if the grid has none.

    Works on integer numerators over the common denominator ``1/step``.
    Raises :class:`SearchSpaceExceeded` after visiting *max_nodes* nodes.
    """
    step = Fraction(step)
    if step <= 0 or step.numerator != 1:
        raise ValueError("step must be 1/q for a positive integer q")
    q = step.denominator
    names = h.concept_names
    pos = {n: i for i, n in enumerate(names)}

    lower = [0] * len(names)
    for c, _, d in h.abox:
        need = -(-d.numerator * q // d.denominator)  # ceil(d * q)
        lower[pos[c]] = max(lower[pos[c]], need)

    # each axiom is checked once its last concept has been assigned
    checks = [[] for _ in names]
    for ax in _compile(h, pos, q):
        checks[max(ax[0] + (ax[1] or ()))].append(ax)

    vals = [0] * len(names)
    nodes = 0

    def search(i):
        nonlocal nodes
        if i == len(names):
            return True
        mine = checks[i]
        for v in range(lower[i], q + 1):
            nodes += 1
            if nodes > max_nodes:
                raise SearchSpaceExceeded(f"grid search visited more than {max_nodes} nodes")
            vals[i] = v
            if all(_holds(vals, ax, q) for ax in mine) and search(i + 1):
                return True
        return False

    if not search(0):
        return None
    return {n: Fraction(vals[i], q) for n, i in pos.items()}


def random_formula(rng: random.Random, n_vars: int, n_clauses: int) -> CnfFormula:
    vs = [str(i) for i in range(1, n_vars + 1)]
    return CnfFormula(tuple(
        tuple((rng.choice(vs), rng.random() < 0.5) for _ in range(3)) for _ in range(n_clauses)
    ))


# DIMACS input and the extended ontology dialect ---------------------------------

def parse_dimacs(text: str) -> CnfFormula:
    """Read DIMACS CNF; every clause must have exactly three literals."""
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise SourceError(lineno, 1, "malformed problem line")
            continue
        col = 1
        for tok in line.split():
            col = raw.index(tok, col - 1) + 1
            try:
                n = int(tok)
            except ValueError:
                raise SourceError(lineno, col, f"expected an integer literal, found {tok!r}") from None
            if n == 0:
                if len(current) != 3:
                    raise SourceError(lineno, col, f"clause has {len(current)} literals, expected 3")
                clauses.append(tuple(current))
                current = []
            else:
                current.append((str(abs(n)), n > 0))
            col += len(tok)
    if current:
        raise SourceError(len(text.splitlines()), 1, "last clause is not terminated by 0")
    return CnfFormula(tuple(clauses))


def serialize_horn(h: HornOntology) -> str:
    lines = []
    for ax in h.axioms:
        lines.append(f"{' & '.join(ax.lhs)} SUBC {' & '.join(ax.rhs)} >= {format_degree(ax.degree)}")
    for c, a, d in h.abox:
        lines.append(f"{c}({a}) >= {format_degree(d)}")
    return "".join(line + "\n" for line in lines)


def _conjunction(cur: _Cursor, allow_bottom: bool) -> tuple:
    out = []
    while True:
        if cur.keyword(BOTTOM):
            if not allow_bottom:
                raise cur.error("BOT may only occur on the right-hand side")
            out.append(BOTTOM)
        else:
            out.append(_name(cur, "concept name"))
        if not cur.accept("&"):
            return tuple(out)


def parse_horn(text: str) -> HornOntology:
    """Read the extended dialect written by :func:`serialize_horn`."""
    axioms, abox = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = tokenize(raw, lineno)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno, len(raw) + 1)
        if len(tokens) > 1 and tokens[1].kind == "(" and tokens[0].text not in KEYWORDS:
            c = _name(cur, "concept name")
            cur.next("(", "'('")
            a = _individual(cur)
            cur.next(")", "')'")
            abox.append((c, a, _degree(cur)))
        else:
            lhs = _conjunction(cur, allow_bottom=False)
            if not cur.keyword("SUBC"):
                raise cur.error("expected SUBC")
            rhs = _conjunction(cur, allow_bottom=True)
            axioms.append(HornAxiom(lhs, rhs, _degree(cur)))
        if not cur.at_end():
            raise cur.error(f"unexpected trailing {cur.peek().text!r}")
    return HornOntology(tuple(axioms), tuple(abox))
