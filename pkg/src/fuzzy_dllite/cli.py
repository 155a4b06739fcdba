"""Command-line front end.

Exit codes: 0 success (or consistent), 1 inconsistent, 2 usage or parse
error, 3 unsupported semantics.
"""

from __future__ import annotations

import json
import sys

import click

from .answering import (
    InconsistentOntology,
    UnsupportedSemantics,
    answer_request,
    check_consistency,
)
from .canonical import Anon, build_canonical, element_key
from .hardness import gen_ontology, parse_dimacs, serialize_horn
from .queries import ConjunctiveQuery
from .rewriting import perfect_ref
from .syntax import SourceError, parse_ontology, parse_query, serialize_union
from .tnorms import TNorm, format_degree, parse_degree

EXIT_INCONSISTENT = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(parser, path):
    try:
        return parser(_read(path))
    except SourceError as exc:
        _fail(f"{path}:{exc}", EXIT_USAGE)
    except OSError as exc:
        _fail(str(exc), EXIT_USAGE)


def _tnorm(ctx, param, value):
    try:
        return TNorm.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _degree(ctx, param, value):
    if value is None:
        return None
    try:
        d = parse_degree(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    if d <= 0:
        raise click.BadParameter("must be positive")
    return d


tnorm_option = click.option("--tnorm", "-t", default="godel", show_default=True, callback=_tnorm,
                            help="godel, product or lukasiewicz")


@click.group()
def main():
    """Query answering over fuzzy DL-Lite_R ontologies."""


@main.command()
@click.argument("ontology")
@tnorm_option
def check(ontology, tnorm):
    """Report whether ONTOLOGY is consistent."""
    o = _load(parse_ontology, ontology)
    try:
        ok = check_consistency(o, tnorm)
    except UnsupportedSemantics as exc:
        _fail(str(exc), EXIT_UNSUPPORTED)
    click.echo("consistent" if ok else "inconsistent")
    sys.exit(0 if ok else EXIT_INCONSISTENT)


def _emit_answers(answers, fmt):
    if fmt == "json":
        rows = []
        for t, d in answers:
            row = {"tuple": list(t)}
            if answers.graded:
                row["degree"] = format_degree(d)
            rows.append(row)
        click.echo(json.dumps({"answers": rows, "complete": True}))
        return
    for t, d in answers:
        cells = list(t) if t else ["()"]
        if answers.graded:
            cells.append(format_degree(d))
        click.echo("\t".join(cells))


@main.command()
@click.argument("ontology")
@click.option("-q", "--query", "query_path", required=True, help="query file (.fq)")
@tnorm_option
@click.option("--at-least", "at_least", callback=_degree, help="answers of degree at least D")
@click.option("--degree-of", "degree_of", help="degree of the comma-separated tuple")
@click.option("--top-k", "top_k", type=click.IntRange(min=1), help="the K best answers")
@click.option("--threshold", is_flag=True, help="answer a threshold query")
@click.option("--positive", is_flag=True, help="answers of positive degree")
@click.option("--assume-consistent", is_flag=True,
              help="skip the (unavailable) consistency check under lukasiewicz")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True)
def query(ontology, query_path, tnorm, at_least, degree_of, top_k, threshold, positive,
          assume_consistent, fmt):
    """Answer the query in QUERY_PATH over ONTOLOGY."""
    chosen = [m for m, v in (("at_least", at_least), ("degree_of", degree_of), ("top_k", top_k),
                             ("threshold", threshold), ("positive", positive))
              if v not in (None, False)]
    if len(chosen) != 1:
        raise click.UsageError("choose exactly one of --at-least, --degree-of, --top-k, "
                               "--threshold, --positive")
    mode = chosen[0]
    o = _load(parse_ontology, ontology)
    q = _load(parse_query, query_path)
    value = {"at_least": at_least, "top_k": top_k}.get(mode)
    if mode == "degree_of":
        value = tuple(s.strip() for s in degree_of.split(",")) if degree_of.strip() else ()
        if len(value) != len(q.head):
            raise click.UsageError(f"--degree-of needs {len(q.head)} individuals")
    if mode == "threshold" and isinstance(q, ConjunctiveQuery):
        raise click.UsageError("--threshold needs a threshold query (atoms with >= bounds)")
    if mode != "threshold" and not isinstance(q, ConjunctiveQuery):
        raise click.UsageError(f"--{mode.replace('_', '-')} needs a conjunctive query")
    try:
        answers = answer_request(o, q, mode, tnorm, value, assume_consistent)
    except UnsupportedSemantics as exc:
        _fail(str(exc), EXIT_UNSUPPORTED)
    except InconsistentOntology as exc:
        _fail(str(exc), EXIT_INCONSISTENT)
    _emit_answers(answers, fmt)


@main.command()
@click.argument("ontology")
@click.option("-q", "--query", "query_path", required=True, help="threshold query file (.fq)")
@tnorm_option
def rewrite(ontology, query_path, tnorm):
    """Print the union of threshold queries equivalent to the query, one per line."""
    o = _load(parse_ontology, ontology)
    q = _load(parse_query, query_path)
    if isinstance(q, ConjunctiveQuery):
        raise click.UsageError("rewrite needs a threshold query (atoms with >= bounds)")
    click.echo(serialize_union(perfect_ref(q, o.tbox, tnorm)), nl=False)


def _elem(e) -> str:
    return str(e) if isinstance(e, Anon) else e


@main.command()
@click.argument("ontology")
@tnorm_option
@click.option("--budget", type=click.IntRange(min=0), help="maximum number of fresh elements")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True)
def materialize(ontology, tnorm, budget, fmt):
    """Dump the canonical interpretation of ONTOLOGY."""
    o = _load(parse_ontology, ontology)
    i, _, complete = build_canonical(o, tnorm, budget)
    concepts = sorted(i.concept_map().items(), key=lambda kv: (kv[0][0], element_key(kv[0][1])))
    roles = sorted(i.role_map().items(),
                   key=lambda kv: (kv[0][0], element_key(kv[0][1]), element_key(kv[0][2])))
    if fmt == "json":
        click.echo(json.dumps({
            "concepts": [[a, _elem(e), format_degree(d)] for (a, e), d in concepts],
            "roles": [[p, _elem(e1), _elem(e2), format_degree(d)] for (p, e1, e2), d in roles],
            "complete": complete,
        }))
    else:
        for (a, e), d in concepts:
            click.echo(f"C\t{a}\t{_elem(e)}\t{format_degree(d)}")
        for (p, e1, e2), d in roles:
            click.echo(f"R\t{p}\t{_elem(e1)}\t{_elem(e2)}\t{format_degree(d)}")
    if not complete:
        click.echo("warning: budget exhausted; the interpretation is incomplete", err=True)


@main.command("gen-hardness")
@click.argument("cnf")
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True), help="write here instead of stdout")
def gen_hardness(cnf, output):
    """Translate a DIMACS 3-CNF file into a Łukasiewicz DL-Lite_Horn ontology."""
    phi = _load(parse_dimacs, cnf)
    text = serialize_horn(gen_ontology(phi))
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
