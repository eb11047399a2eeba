"""argweave: structured argumentation over taxonomy-backed debate corpora.

The package models debates as corpora of scheme-based arguments (expert
opinion, cause to effect) whose premises reference statements, sources, and
taxonomy concepts. Critical questions attached to each scheme are evaluated
against corpus facts to yield objection degrees, and the mean of the evaluable
degrees gives an argument's credibility. A small query language retrieves
arguments by scheme, stance, author, location, posting date, and annotation.

Corpora are immutable snapshots: every mutation returns a new version, so
readers never observe partial updates. The CLI (``argweave``) and the HTTP
service expose the same operations with byte-identical JSON output.
"""

from .corpus import (
    Argument,
    Challenge,
    Corpus,
    CorpusStore,
    Source,
    Statement,
    TestimonyLink,
    format_utc,
    parse_utc,
)
from .credibility import (
    CqDegree,
    CredibilityReport,
    credibility,
    degree_number,
    explain,
    format_degree,
)
from .errors import (
    AlreadyResolved,
    AmbiguousConcept,
    ConflictingTestimony,
    CycleWouldForm,
    DanglingReference,
    DuplicateConcept,
    DuplicateId,
    DuplicateOpenChallenge,
    DuplicateScheme,
    EngineError,
    InvalidArgument,
    InvalidDefinition,
    InvariantViolation,
    ParseError,
    QuerySyntaxError,
    UnknownArgument,
    UnknownChallenge,
    UnknownConcept,
    UnknownCq,
    UnknownParent,
    UnknownScheme,
    UnknownSource,
    UnknownStatement,
    UnknownTaxonomy,
)
from .query import Filter, Query, evaluate, parse, print_query, resolve_relative_dates
from .schemes import (
    CriticalQuestion,
    PremiseSlot,
    SchemeDefinition,
    SchemeRegistry,
    builtin_registry,
    load_schemes,
    validate_instantiation,
)
from .serialize import canonical_json, canonical_json_bytes
from .taxonomy import Taxonomy, load_taxonomies

__version__ = "0.1.0"

__all__ = [
    "Argument",
    "Challenge",
    "Corpus",
    "CorpusStore",
    "Source",
    "Statement",
    "TestimonyLink",
    "format_utc",
    "parse_utc",
    "CqDegree",
    "CredibilityReport",
    "credibility",
    "degree_number",
    "explain",
    "format_degree",
    "AlreadyResolved",
    "AmbiguousConcept",
    "ConflictingTestimony",
    "CycleWouldForm",
    "DanglingReference",
    "DuplicateConcept",
    "DuplicateId",
    "DuplicateOpenChallenge",
    "DuplicateScheme",
    "EngineError",
    "InvalidArgument",
    "InvalidDefinition",
    "InvariantViolation",
    "ParseError",
    "QuerySyntaxError",
    "UnknownArgument",
    "UnknownChallenge",
    "UnknownConcept",
    "UnknownCq",
    "UnknownParent",
    "UnknownScheme",
    "UnknownSource",
    "UnknownStatement",
    "UnknownTaxonomy",
    "Filter",
    "Query",
    "evaluate",
    "parse",
    "print_query",
    "resolve_relative_dates",
    "CriticalQuestion",
    "PremiseSlot",
    "SchemeDefinition",
    "SchemeRegistry",
    "builtin_registry",
    "load_schemes",
    "validate_instantiation",
    "canonical_json",
    "canonical_json_bytes",
    "Taxonomy",
    "load_taxonomies",
    "__version__",
]
