"""Text formats for ontologies (``.fdl``) and queries (``.fq``).

Ontology files hold one statement per line::

    Museum SUBC Popular >= 0.6
    EX locIn SUBC NOT Cheap >= 0.5
    locIn SUBR near >= 1
    Museum(modernArt) >= 1
    near(irish, comic) >= 0.7

Queries are written as rules. A query whose atoms carry bounds is a threshold
query; otherwise it is a conjunctive query::

    q(x) :- Cheap(x), Popular(y), near(x,y).
    q(x) :- Cheap(x) >= 0.8, Popular(y) >= 0.6, near(x,y) >= 0.6.

Unquoted terms are variables, quoted terms (``'a'``) are individuals and
``_`` is a fresh variable occurring nowhere else.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count

from .ontology import (
    RESERVED_PREFIX,
    Axiom,
    ConceptAssertion,
    ConceptName,
    Exists,
    Not,
    Ontology,
    Role,
    RoleAssertion,
)
from .queries import (
    Atom,
    ConjunctiveQuery,
    Ind,
    ThresholdAtom,
    ThresholdQuery,
    UnionTQ,
    Var,
)
from .tnorms import ZERO, format_degree, parse_degree

KEYWORDS = frozenset({"EX", "NOT", "SUBC", "SUBR", "BOT"})
NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class SourceError(ValueError):
    """A syntax or validation error at a 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = max(line, 1)
        self.column = max(column, 1)
        self.message = message
        super().__init__(f"{self.line}:{self.column}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, QUOTED, DEGREE, or the punctuation itself
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<DEGREE>\d+(?:\.\d+)?(?:/\d+)?|\.\d+)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<QUOTED>'[^'\n]*'|"[^"\n]*")
  | (?P<punct>>=|:-|[(),.\-&])
    """,
    re.VERBOSE,
)


def tokenize(line_text: str, lineno: int) -> list:
    body = line_text.split("#", 1)[0]
    out, pos = [], 0
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if m is None:
            raise SourceError(lineno, pos + 1, f"unexpected character {body[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            out.append(Token(text if kind == "punct" else kind, text, lineno, pos + 1))
        pos = m.end()
    return out


class _Cursor:
    """Sequential reader over the tokens of one logical unit."""

    def __init__(self, tokens, line, end_col):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.end_col = end_col

    def peek(self, offset=0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at_end(self):
        return self.i >= len(self.tokens)

    def error(self, message, tok=None):
        tok = tok or self.peek()
        if tok is None:
            return SourceError(self.line, self.end_col, message)
        return SourceError(tok.line, tok.col, message)

    def next(self, kind=None, what=None):
        tok = self.peek()
        if tok is None or (kind is not None and tok.kind != kind):
            found = "end of input" if tok is None else repr(tok.text)
            raise self.error(f"expected {what or kind}, found {found}")
        self.i += 1
        return tok

    def accept(self, kind, text=None):
        tok = self.peek()
        if tok is not None and tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return tok
        return None

    def keyword(self, word):
        return self.accept("NAME", word)


def _name(cur: _Cursor, what: str) -> str:
    tok = cur.next("NAME", what)
    if tok.text in KEYWORDS:
        raise cur.error(f"keyword {tok.text} cannot be used as a {what}", tok)
    if tok.text.startswith("_"):
        raise cur.error(f"{what} {tok.text!r} may not start with '_'", tok)
    return tok.text


def _individual(cur: _Cursor) -> str:
    tok = cur.accept("QUOTED")
    if tok is not None:
        if len(tok.text) == 2:
            raise cur.error("empty individual name", tok)
        return tok.text[1:-1]
    return _name(cur, "individual")


def _role(cur: _Cursor) -> Role:
    name = _name(cur, "role name")
    return Role(name, inverse=cur.accept("-") is not None)


def _degree(cur: _Cursor):
    cur.next(">=", "'>='")
    tok = cur.next("DEGREE", "a degree")
    try:
        d = parse_degree(tok.text)
    except ValueError as exc:
        raise cur.error(str(exc), tok) from None
    if d == ZERO:
        raise cur.error("degree 0 is vacuous and not allowed", tok)
    return d


def _basic_concept(cur: _Cursor):
    if cur.keyword("EX"):
        return Exists(_role(cur))
    return ConceptName(_name(cur, "concept name"))


def _concept_expr(cur: _Cursor):
    if cur.keyword("NOT"):
        tok = cur.peek()
        if tok is not None and tok.kind == "NAME" and tok.text == "NOT":
            raise cur.error("negation applies to basic concepts only")
        return Not(_basic_concept(cur))
    return _basic_concept(cur)


def _check_reserved(cur: _Cursor, *names):
    for n in names:
        if n.startswith(RESERVED_PREFIX):
            raise cur.error(f"name {n!r} uses the reserved prefix {RESERVED_PREFIX}", cur.tokens[0])


def _parse_statement(cur: _Cursor):
    first = cur.peek()
    # A(a) / P(a,b) / EX P(a)
    is_assertion = (
        first.kind == "NAME" and first.text not in KEYWORDS and cur.peek(1) is not None
        and cur.peek(1).kind == "("
    ) or (
        first.text == "EX" and cur.peek(2) is not None
        and (cur.peek(2).kind == "(" or (cur.peek(2).kind == "-" and cur.peek(3) is not None
                                         and cur.peek(3).kind == "("))
    )
    if is_assertion:
        if cur.keyword("EX"):
            role = _role(cur)
            cur.next("(", "'('")
            a = _individual(cur)
            cur.next(")", "')'")
            _check_reserved(cur, role.name)
            return ConceptAssertion(Exists(role), a, _degree(cur))
        pred = _name(cur, "predicate")
        cur.next("(", "'('")
        a = _individual(cur)
        if cur.accept(","):
            b = _individual(cur)
            cur.next(")", "')'")
            _check_reserved(cur, pred)
            return RoleAssertion(pred, a, b, _degree(cur))
        cur.next(")", "')'")
        _check_reserved(cur, pred)
        return ConceptAssertion(ConceptName(pred), a, _degree(cur))

    if first.text == "NOT":
        raise cur.error("negation cannot occur on the left-hand side of an inclusion")

    # role inclusion: ROLE SUBR [NOT] ROLE
    j = 2 if cur.peek(1) is not None and cur.peek(1).kind == "-" else 1
    nxt = cur.peek(j)
    if first.kind == "NAME" and nxt is not None and nxt.text == "SUBR":
        lhs = _role(cur)
        cur.keyword("SUBR")
        rhs = Not(_role(cur)) if cur.keyword("NOT") else _role(cur)
        _check_reserved(cur, lhs.name, (rhs.arg if isinstance(rhs, Not) else rhs).name)
        return Axiom(lhs, rhs, _degree(cur))

    lhs = _basic_concept(cur)
    if cur.peek() is not None and cur.peek().text == "SUBR":
        raise cur.error("SUBR relates roles, not concepts")
    if not cur.keyword("SUBC"):
        raise cur.error("expected SUBC, SUBR or an assertion")
    rhs = _concept_expr(cur)
    names = [x.name if isinstance(x, ConceptName) else x.role.name
             for x in (lhs, rhs.arg if isinstance(rhs, Not) else rhs)]
    _check_reserved(cur, *names)
    return Axiom(lhs, rhs, _degree(cur))


def parse_ontology(text: str) -> Ontology:
    """Parse ``.fdl`` text; raises :class:`SourceError` on the first bad line."""
    tbox, abox = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = tokenize(raw, lineno)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno, len(raw.split("#", 1)[0].rstrip()) + 1)
        try:
            st = _parse_statement(cur)
        except SourceError:
            raise
        except ValueError as exc:
            raise SourceError(lineno, 1, str(exc)) from None
        if not cur.at_end():
            raise cur.error(f"unexpected trailing {cur.peek().text!r}")
        (tbox if isinstance(st, Axiom) else abox).append(st)
    try:
        return Ontology(tuple(tbox), tuple(abox))
    except ValueError as exc:
        raise SourceError(1, 1, str(exc)) from None


def _split_units(text: str):
    """Yield (tokens, line, end_col) for each '.'-terminated query."""
    pending, last_line, last_col = [], 1, 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        for tok in tokenize(raw, lineno):
            pending.append(tok)
            if tok.kind == ".":
                yield pending, tok.line, tok.col
                pending = []
        if raw.split("#", 1)[0].strip():
            last_line, last_col = lineno, len(raw.split("#", 1)[0].rstrip()) + 1
    if pending:
        raise SourceError(last_line, last_col, "query must end with '.'")


def _term(cur: _Cursor, fresh, anon: bool = True):
    tok = cur.peek()
    if tok is not None and tok.kind == "QUOTED":
        return Ind(_individual(cur))
    tok = cur.next("NAME", "a term")
    if tok.text == "_":
        if not anon:
            raise cur.error("'_' cannot be an answer variable", tok)
        return Var(f"_{next(fresh)}")
    if tok.text.startswith("_"):
        raise cur.error(f"variable {tok.text!r} may not start with '_'", tok)
    if tok.text in KEYWORDS:
        raise cur.error(f"keyword {tok.text} cannot be used as a term", tok)
    return Var(tok.text)


def _parse_query_unit(cur: _Cursor):
    fresh = count(1)
    name = _name(cur, "query name")
    cur.next("(", "'('")
    head = []
    if not cur.accept(")"):
        while True:
            head.append(_term(cur, fresh, anon=False))
            if cur.accept(")"):
                break
            cur.next(",", "',' or ')'")
    cur.next(":-", "':-'")
    atoms, bounded = [], []
    while True:
        start = cur.peek()
        pred = _name(cur, "predicate")
        _check_reserved(cur, pred)
        cur.next("(", "'('")
        terms = [_term(cur, fresh)]
        if cur.accept(","):
            terms.append(_term(cur, fresh))
        cur.next(")", "')'")
        if cur.peek() is not None and cur.peek().kind == ">=":
            atoms.append(ThresholdAtom(pred, tuple(terms), _degree(cur)))
            bounded.append(True)
        else:
            atoms.append(Atom(pred, tuple(terms)))
            bounded.append(False)
        if len(set(bounded)) > 1:
            raise cur.error("either every atom carries a bound or none does", start)
        if cur.accept("."):
            break
        cur.next(",", "',' or '.'")
    if not cur.at_end():
        raise cur.error(f"unexpected trailing {cur.peek().text!r}")
    body_vars = {t for a in atoms for t in a.terms}
    for t in head:
        if isinstance(t, Var) and t not in body_vars:
            raise cur.error(f"answer variable {t.name} does not occur in the body", cur.tokens[0])
    cls = ThresholdQuery if bounded[0] else ConjunctiveQuery
    return cls(tuple(head), tuple(atoms), name)


def parse_queries(text: str) -> list:
    """Parse every query in *text*, in order."""
    out = []
    for tokens, line, col in _split_units(text):
        out.append(_parse_query_unit(_Cursor(tokens, line, col)))
    return out


def parse_query(text: str):
    """Parse exactly one conjunctive or threshold query."""
    qs = parse_queries(text)
    if len(qs) != 1:
        raise SourceError(1, 1, f"expected exactly one query, found {len(qs)}")
    return qs[0]


def parse_union(text: str) -> UnionTQ:
    qs = parse_queries(text)
    if not qs or not all(isinstance(q, ThresholdQuery) for q in qs):
        raise SourceError(1, 1, "a union needs one or more threshold queries")
    try:
        return UnionTQ(tuple(qs))
    except ValueError as exc:
        raise SourceError(1, 1, str(exc)) from None


def _ind_text(name: str) -> str:
    if NAME_RE.match(name) and name not in KEYWORDS:
        return name
    return f"'{name}'"


def _concept_text(c) -> str:
    if isinstance(c, Not):
        return f"NOT {_concept_text(c.arg)}"
    return str(c)


def serialize_statement(st) -> str:
    deg = format_degree(st.degree)
    if isinstance(st, Axiom):
        op = "SUBR" if st.is_role else "SUBC"
        return f"{_concept_text(st.lhs)} {op} {_concept_text(st.rhs)} >= {deg}"
    if isinstance(st, ConceptAssertion):
        return f"{st.concept}({_ind_text(st.individual)}) >= {deg}"
    return f"{st.role}({_ind_text(st.subject)}, {_ind_text(st.object)}) >= {deg}"


def serialize_ontology(o: Ontology) -> str:
    return "".join(serialize_statement(st) + "\n" for st in o.statements)


def serialize_query(q) -> str:
    return str(q)


def serialize_union(u) -> str:
    return "".join(f"{q}\n" for q in u)
