"""Query answering over fuzzy DL-Lite_R ontologies under Gödel, product and Łukasiewicz semantics."""

from .answering import (
    ConsistencyAssumptionRequired,
    InconsistentOntology,
    UnsupportedSemantics,
    answer_at_least,
    answer_request,
    answer_threshold,
    check_consistency,
    cq_to_tq,
    degree_of,
    positive_answers,
    top_k,
)
from .canonical import FuzzyInterpretation, build_canonical, build_complete, check_model
from .database import AnswerSet, from_abox
from .ontology import (
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
from .queries import Atom, ConjunctiveQuery, Ind, ThresholdAtom, ThresholdQuery, UnionTQ, Var, cq, tq
from .rewriting import perfect_ref
from .syntax import SourceError, parse_ontology, parse_query, serialize_ontology, serialize_query
from .tnorms import TNorm

__version__ = "0.1.0"

__all__ = [
    "ConsistencyAssumptionRequired",
    "InconsistentOntology",
    "UnsupportedSemantics",
    "answer_at_least",
    "answer_request",
    "answer_threshold",
    "check_consistency",
    "cq_to_tq",
    "degree_of",
    "positive_answers",
    "top_k",
    "FuzzyInterpretation",
    "build_canonical",
    "build_complete",
    "check_model",
    "AnswerSet",
    "from_abox",
    "Axiom",
    "ConceptAssertion",
    "ConceptName",
    "Exists",
    "Not",
    "Ontology",
    "Role",
    "RoleAssertion",
    "classical_version",
    "cut",
    "degree_set",
    "make_ontology",
    "normalize",
    "Atom",
    "ConjunctiveQuery",
    "Ind",
    "ThresholdAtom",
    "ThresholdQuery",
    "UnionTQ",
    "Var",
    "cq",
    "tq",
    "perfect_ref",
    "SourceError",
    "parse_ontology",
    "parse_query",
    "serialize_ontology",
    "serialize_query",
    "TNorm",
]
