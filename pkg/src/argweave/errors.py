"""Exception types shared across the engine.

Every error carries a machine-readable ``code`` so the HTTP facade and the
CLI can map engine failures onto their own surfaces (API error payloads,
exit codes) without string matching.
"""


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"


# taxonomy -----------------------------------------------------------------

class UnknownTaxonomy(EngineError):
    code = "unknown_taxonomy"


class UnknownConcept(EngineError):
    code = "unknown_concept"


class AmbiguousConcept(EngineError):
    """A bare concept id resolved in more than one loaded taxonomy."""

    code = "ambiguous_concept"


class DuplicateConcept(EngineError):
    code = "duplicate_concept"


class UnknownParent(EngineError):
    code = "unknown_parent"


class CycleWouldForm(EngineError):
    code = "cycle_would_form"


# schemes ------------------------------------------------------------------

class UnknownScheme(EngineError):
    code = "unknown_scheme"


class DuplicateScheme(EngineError):
    code = "duplicate_scheme"


class InvalidDefinition(EngineError):
    code = "invalid_definition"


# corpus -------------------------------------------------------------------

class ParseError(EngineError):
    code = "parse_error"


class DanglingReference(EngineError):
    code = "dangling_reference"


class InvariantViolation(EngineError):
    code = "invariant_violation"


class DuplicateId(EngineError):
    code = "duplicate_id"


class InvalidArgument(EngineError):
    code = "invalid_argument"


class UnknownArgument(EngineError):
    code = "unknown_argument"


class UnknownStatement(EngineError):
    code = "unknown_statement"


class UnknownSource(EngineError):
    code = "unknown_source"


class UnknownCq(EngineError):
    code = "unknown_cq"


class DuplicateOpenChallenge(EngineError):
    code = "duplicate_open_challenge"


class UnknownChallenge(EngineError):
    code = "unknown_challenge"


class AlreadyResolved(EngineError):
    code = "already_resolved"


class ConflictingTestimony(EngineError):
    code = "conflicting_testimony"


# query --------------------------------------------------------------------

class QuerySyntaxError(EngineError):
    """Query text failed to parse.

    ``offset`` is the byte offset of the offending token; ``expected`` is a
    short hint naming what the parser was looking for.
    """

    code = "syntax_error"

    def __init__(self, message: str, offset: int, expected: str = ""):
        super().__init__(message)
        self.offset = offset
        self.expected = expected
