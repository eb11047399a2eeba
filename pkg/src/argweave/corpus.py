"""The argumentation knowledge base: statements, sources, testimony,
arguments, and critical-question challenges.

A ``Corpus`` is an immutable snapshot. Every mutation returns a new corpus
with its version incremented; a failed mutation raises and leaves the old
snapshot untouched. Credibility evaluation and querying run against a
snapshot and are pure. ``CorpusStore`` serialises writers for the HTTP
service while readers keep whatever snapshot they grabbed.

Referential integrity is absolute: a corpus never holds an id that does not
resolve. File loading is all-or-nothing, so credibility math cannot run
over typos.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Callable, Mapping

from .errors import (
    AlreadyResolved,
    ConflictingTestimony,
    DanglingReference,
    DuplicateId,
    DuplicateOpenChallenge,
    InvalidArgument,
    InvariantViolation,
    ParseError,
    UnknownArgument,
    UnknownChallenge,
    UnknownCq,
    UnknownSource,
    UnknownStatement,
)
from .schemes import SchemeRegistry, builtin_registry, validate_instantiation
from .taxonomy import Taxonomy, load_taxonomies

ConceptRef = tuple[str, str]  # (taxonomy name, concept id)

POLARITIES = ("supports", "opposes")
STANCES = ("pro", "con")


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    if not isinstance(value, str):
        raise ParseError(f"timestamp must be a string, got {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ParseError(f"bad timestamp {value!r}: {exc}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_utc(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _concept_ref(raw) -> ConceptRef:
    if (not isinstance(raw, (list, tuple)) or len(raw) != 2
            or not all(isinstance(part, str) for part in raw)):
        raise ParseError(f"concept reference must be [taxonomy, concept]: {raw!r}")
    return (raw[0], raw[1])


def _require_str(data: dict, key: str, where: str) -> str:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}: field {key!r} must be a non-empty string")
    return value


@dataclass(frozen=True, eq=True)
class Statement:
    id: str
    text: str
    topic_concepts: tuple[ConceptRef, ...] = ()
    field: ConceptRef | None = None

    @classmethod
    def from_dict(cls, data: dict) -> Statement:
        sid = _require_str(data, "id", "statement")
        text = _require_str(data, "text", f"statement {sid!r}")
        topics = tuple(_concept_ref(t) for t in data.get("topic_concepts", []))
        fld = data.get("field")
        return cls(sid, text, topics, _concept_ref(fld) if fld is not None else None)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "topic_concepts": [list(t) for t in self.topic_concepts],
            "field": list(self.field) if self.field else None,
        }


@dataclass(frozen=True, eq=True)
class Source:
    id: str
    display_name: str
    expertise: tuple[str, ...] = ()
    location: str | None = None
    unreliable_flags: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> Source:
        sid = _require_str(data, "id", "source")
        return cls(
            id=sid,
            display_name=data.get("display_name", sid),
            expertise=tuple(data.get("expertise", [])),
            location=data.get("location"),
            unreliable_flags=tuple(data.get("unreliable_flags", [])),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "display_name": self.display_name,
            "expertise": sorted(self.expertise),
            "location": self.location,
            "unreliable_flags": list(self.unreliable_flags),
        }


@dataclass(frozen=True, eq=True)
class TestimonyLink:
    source: str
    statement: str
    polarity: str
    asserted_at: datetime

    @classmethod
    def from_dict(cls, data: dict) -> TestimonyLink:
        return cls(
            source=_require_str(data, "source", "testimony"),
            statement=_require_str(data, "statement", "testimony"),
            polarity=_require_str(data, "polarity", "testimony"),
            asserted_at=parse_utc(_require_str(data, "asserted_at", "testimony")),
        )

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "statement": self.statement,
            "polarity": self.polarity,
            "asserted_at": format_utc(self.asserted_at),
        }


@dataclass(frozen=True, eq=True)
class Argument:
    id: str
    scheme: str
    fillers: Mapping[str, str]
    conclusion: str
    target_hypothesis: str
    stance: str
    author: str
    posted_at: datetime
    author_location: str | None = None
    evidence_links: tuple[str, ...] = ()
    annotations: tuple[ConceptRef, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> Argument:
        aid = _require_str(data, "id", "argument")
        where = f"argument {aid!r}"
        fillers = data.get("fillers")
        if not isinstance(fillers, dict):
            raise ParseError(f"{where}: fillers must be an object")
        return cls(
            id=aid,
            scheme=_require_str(data, "scheme", where),
            fillers=dict(fillers),
            conclusion=_require_str(data, "conclusion", where),
            target_hypothesis=_require_str(data, "target_hypothesis", where),
            stance=_require_str(data, "stance", where),
            author=_require_str(data, "author", where),
            posted_at=parse_utc(_require_str(data, "posted_at", where)),
            author_location=data.get("author_location"),
            evidence_links=tuple(data.get("evidence_links", [])),
            annotations=tuple(_concept_ref(a) for a in data.get("annotations", [])),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "scheme": self.scheme,
            "fillers": dict(sorted(self.fillers.items())),
            "conclusion": self.conclusion,
            "target_hypothesis": self.target_hypothesis,
            "stance": self.stance,
            "author": self.author,
            "author_location": self.author_location,
            "posted_at": format_utc(self.posted_at),
            "evidence_links": list(self.evidence_links),
            "annotations": [list(a) for a in self.annotations],
        }


@dataclass(frozen=True, eq=True)
class Challenge:
    id: str
    argument: str
    cq_id: str
    raised_by: str
    raised_at: datetime
    status: str = "open"
    resolution_note: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> Challenge:
        cid = _require_str(data, "id", "challenge")
        where = f"challenge {cid!r}"
        status = data.get("status", "open")
        if status not in ("open", "resolved"):
            raise ParseError(f"{where}: bad status {status!r}")
        return cls(
            id=cid,
            argument=_require_str(data, "argument", where),
            cq_id=_require_str(data, "cq_id", where),
            raised_by=_require_str(data, "raised_by", where),
            raised_at=parse_utc(_require_str(data, "raised_at", where)),
            status=status,
            resolution_note=data.get("resolution_note"),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "argument": self.argument,
            "cq_id": self.cq_id,
            "raised_by": self.raised_by,
            "raised_at": format_utc(self.raised_at),
            "status": self.status,
            "resolution_note": self.resolution_note,
        }


@dataclass(frozen=True, eq=True)
class Corpus:
    """Immutable, versioned snapshot of the whole knowledge base."""

    version: int = 1
    taxonomies: dict[str, Taxonomy] = field(default_factory=dict)
    expertise_taxonomy: str = "expertise"
    location_taxonomy: str = "locations"
    schemes: SchemeRegistry = field(default_factory=builtin_registry)
    statements: dict[str, Statement] = field(default_factory=dict)
    sources: dict[str, Source] = field(default_factory=dict)
    testimony: dict[tuple[str, str], TestimonyLink] = field(default_factory=dict)
    arguments: dict[str, Argument] = field(default_factory=dict)
    challenges: dict[str, Challenge] = field(default_factory=dict)

    # -- lookups -------------------------------------------------------------

    def taxonomy(self, name: str) -> Taxonomy:
        try:
            return self.taxonomies[name]
        except KeyError:
            raise DanglingReference(f"unknown taxonomy {name!r}") from None

    def expertise_tax(self) -> Taxonomy:
        return self.taxonomy(self.expertise_taxonomy)

    def location_tax(self) -> Taxonomy:
        return self.taxonomy(self.location_taxonomy)

    def argument(self, argument_id: str) -> Argument:
        try:
            return self.arguments[argument_id]
        except KeyError:
            raise UnknownArgument(f"unknown argument {argument_id!r}") from None

    def open_challenges(self, argument_id: str) -> dict[str, Challenge]:
        """Open challenges for one argument, keyed by cq_id."""
        out = {}
        for challenge in self.challenges.values():
            if challenge.argument == argument_id and challenge.status == "open":
                out[challenge.cq_id] = challenge
        return out

    def testimony_on(self, statement_id: str) -> list[TestimonyLink]:
        return sorted(
            (link for link in self.testimony.values()
             if link.statement == statement_id),
            key=lambda link: link.source,
        )

    # -- mutations (functional) ----------------------------------------------

    def add_argument(self, argument: Argument) -> Corpus:
        if argument.id in self.arguments:
            raise DuplicateId(f"argument {argument.id!r} already exists")
        problems = self._argument_violations(argument)
        if problems:
            raise InvalidArgument(f"argument {argument.id!r}: " + "; ".join(problems))
        arguments = {**self.arguments, argument.id: argument}
        return replace(self, version=self.version + 1, arguments=arguments)

    def convey_cq(self, argument_id: str, cq_id: str, raised_by: str,
                  raised_at: datetime | None = None) -> tuple[Corpus, Challenge]:
        argument = self.argument(argument_id)
        defn = self.schemes.get(argument.scheme)
        if defn.cq(cq_id) is None:
            raise UnknownCq(f"scheme {argument.scheme!r} has no {cq_id!r}")
        if cq_id in self.open_challenges(argument_id):
            raise DuplicateOpenChallenge(
                f"{cq_id} on {argument_id!r} is already challenged"
            )
        number = 1
        while f"ch{number}" in self.challenges:
            number += 1
        challenge = Challenge(
            id=f"ch{number}",
            argument=argument_id,
            cq_id=cq_id,
            raised_by=raised_by,
            raised_at=raised_at or datetime.now(timezone.utc),
        )
        challenges = {**self.challenges, challenge.id: challenge}
        return replace(self, version=self.version + 1, challenges=challenges), challenge

    def resolve_cq(self, challenge_id: str, note: str | None = None) -> Corpus:
        try:
            challenge = self.challenges[challenge_id]
        except KeyError:
            raise UnknownChallenge(f"unknown challenge {challenge_id!r}") from None
        if challenge.status == "resolved":
            raise AlreadyResolved(f"challenge {challenge_id!r} is already resolved")
        resolved = replace(challenge, status="resolved", resolution_note=note)
        challenges = {**self.challenges, challenge_id: resolved}
        return replace(self, version=self.version + 1, challenges=challenges)

    def assert_testimony(self, source_id: str, statement_id: str, polarity: str,
                         asserted_at: datetime) -> Corpus:
        if source_id not in self.sources:
            raise UnknownSource(f"unknown source {source_id!r}")
        if statement_id not in self.statements:
            raise UnknownStatement(f"unknown statement {statement_id!r}")
        if polarity not in POLARITIES:
            raise InvariantViolation(f"bad polarity {polarity!r}")
        key = (source_id, statement_id)
        existing = self.testimony.get(key)
        if existing is not None:
            if existing.polarity == polarity:
                return self  # idempotent re-assert, no version bump
            raise ConflictingTestimony(
                f"{source_id!r} already {existing.polarity} {statement_id!r}"
            )
        link = TestimonyLink(source_id, statement_id, polarity, asserted_at)
        testimony = {**self.testimony, key: link}
        return replace(self, version=self.version + 1, testimony=testimony)

    # -- validation ------------------------------------------------------------

    def _argument_violations(self, argument: Argument) -> list[str]:
        problems = []
        if not self.schemes.contains(argument.scheme):
            return [f"unknown scheme {argument.scheme!r}"]
        defn = self.schemes.get(argument.scheme)
        problems.extend(validate_instantiation(defn, argument.fillers))
        kind_by_slot = {slot.name: slot.kind for slot in defn.premises}
        for slot_name, value in argument.fillers.items():
            kind = kind_by_slot.get(slot_name)
            if kind == "source-ref" and value not in self.sources:
                problems.append(f"slot {slot_name!r}: unknown source {value!r}")
            elif kind == "statement-ref" and value not in self.statements:
                problems.append(f"slot {slot_name!r}: unknown statement {value!r}")
            elif kind == "concept-ref":
                tax = self.taxonomies.get(self.expertise_taxonomy)
                if tax is None or not tax.contains(value):
                    problems.append(
                        f"slot {slot_name!r}: unknown concept {value!r} "
                        f"in taxonomy {self.expertise_taxonomy!r}"
                    )
        if argument.conclusion not in self.statements:
            problems.append(f"unknown conclusion statement {argument.conclusion!r}")
        if argument.target_hypothesis not in self.statements:
            problems.append(
                f"unknown hypothesis statement {argument.target_hypothesis!r}"
            )
        if argument.stance not in STANCES:
            problems.append(f"stance must be pro or con, got {argument.stance!r}")
        if argument.author_location is not None:
            tax = self.taxonomies.get(self.location_taxonomy)
            if tax is None or not tax.contains(argument.author_location):
                problems.append(
                    f"unknown author location {argument.author_location!r}"
                )
        for tax_name, concept in argument.annotations:
            tax = self.taxonomies.get(tax_name)
            if tax is None:
                problems.append(f"annotation names unknown taxonomy {tax_name!r}")
            elif not tax.contains(concept):
                problems.append(
                    f"annotation concept {concept!r} not in taxonomy {tax_name!r}"
                )
        if argument.posted_at.tzinfo is None:
            problems.append("posted_at must be timezone-aware UTC")
        return problems

    def _concept_ref_error(self, ref: ConceptRef, where: str) -> str | None:
        tax_name, concept = ref
        tax = self.taxonomies.get(tax_name)
        if tax is None:
            return f"{where}: unknown taxonomy {tax_name!r}"
        if not tax.contains(concept):
            return f"{where}: unknown concept {concept!r} in taxonomy {tax_name!r}"
        return None

    def audit(self) -> None:
        """Full referential-integrity check; raises on the first violation."""
        for statement in self.statements.values():
            refs = list(statement.topic_concepts)
            if statement.field is not None:
                refs.append(statement.field)
            for ref in refs:
                error = self._concept_ref_error(ref, f"statement {statement.id!r}")
                if error:
                    raise DanglingReference(error)
        for source in self.sources.values():
            if source.expertise:
                tax = self.taxonomies.get(self.expertise_taxonomy)
                if tax is None:
                    raise DanglingReference(
                        f"source {source.id!r} has expertise but taxonomy "
                        f"{self.expertise_taxonomy!r} is not loaded"
                    )
                for concept in source.expertise:
                    if not tax.contains(concept):
                        raise DanglingReference(
                            f"source {source.id!r}: unknown expertise {concept!r}"
                        )
            if source.location is not None:
                tax = self.taxonomies.get(self.location_taxonomy)
                if tax is None or not tax.contains(source.location):
                    raise DanglingReference(
                        f"source {source.id!r}: unknown location {source.location!r}"
                    )
        for key, link in self.testimony.items():
            if key != (link.source, link.statement):
                raise InvariantViolation(f"testimony index mismatch for {key}")
            if link.source not in self.sources:
                raise DanglingReference(f"testimony names unknown source {link.source!r}")
            if link.statement not in self.statements:
                raise DanglingReference(
                    f"testimony names unknown statement {link.statement!r}"
                )
            if link.polarity not in POLARITIES:
                raise InvariantViolation(f"bad polarity {link.polarity!r}")
        for argument in self.arguments.values():
            problems = self._argument_violations(argument)
            if problems:
                raise DanglingReference(
                    f"argument {argument.id!r}: {problems[0]}"
                )
        open_pairs = set()
        for challenge in self.challenges.values():
            if challenge.argument not in self.arguments:
                raise DanglingReference(
                    f"challenge {challenge.id!r} names unknown argument "
                    f"{challenge.argument!r}"
                )
            defn = self.schemes.get(self.arguments[challenge.argument].scheme)
            if defn.cq(challenge.cq_id) is None:
                raise DanglingReference(
                    f"challenge {challenge.id!r}: scheme {defn.id!r} has no "
                    f"{challenge.cq_id!r}"
                )
            if challenge.status == "open":
                pair = (challenge.argument, challenge.cq_id)
                if pair in open_pairs:
                    raise InvariantViolation(
                        f"duplicate open challenge on {pair}"
                    )
                open_pairs.add(pair)

    def content_equal(self, other: Corpus) -> bool:
        """Equality ignoring the version counter."""
        return replace(self, version=0) == replace(other, version=0)

    # -- (de)serialisation -----------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | None = None,
                  schemes: SchemeRegistry | None = None,
                  extra_taxonomies: Mapping[str, Taxonomy] | None = None) -> Corpus:
        if not isinstance(data, dict):
            raise ParseError("corpus file must be a JSON object")
        refs = []
        for ref in data.get("taxonomy_refs", []):
            if isinstance(ref, str) and base_dir is not None:
                ref = os.path.join(base_dir, ref) if not os.path.isabs(ref) else ref
            refs.append(ref)
        taxonomies = load_taxonomies(refs)
        for name, tax in (extra_taxonomies or {}).items():
            if name in taxonomies:
                raise ParseError(f"duplicate taxonomy name {name!r}")
            taxonomies[name] = tax

        def load_section(key, parse, index_key):
            out = {}
            for item in data.get(key, []):
                record = parse(item)
                idx = index_key(record)
                if idx in out:
                    raise ParseError(f"duplicate {key} id {idx!r}")
                out[idx] = record
            return out

        corpus = cls(
            version=1,
            taxonomies=taxonomies,
            expertise_taxonomy=data.get("expertise_taxonomy", "expertise"),
            location_taxonomy=data.get("location_taxonomy", "locations"),
            schemes=schemes or builtin_registry(),
            statements=load_section("statements", Statement.from_dict, lambda s: s.id),
            sources=load_section("sources", Source.from_dict, lambda s: s.id),
            testimony=load_section(
                "testimony", TestimonyLink.from_dict,
                lambda t: (t.source, t.statement),
            ),
            arguments=load_section("arguments", Argument.from_dict, lambda a: a.id),
            challenges=load_section("challenges", Challenge.from_dict, lambda c: c.id),
        )
        corpus.audit()
        return corpus

    @classmethod
    def load(cls, path, schemes: SchemeRegistry | None = None,
             extra_taxonomies: Mapping[str, Taxonomy] | None = None) -> Corpus:
        """Ingest a corpus file; all-or-nothing."""
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from exc
        return cls.from_dict(data, base_dir=os.path.dirname(os.fspath(path)),
                             schemes=schemes, extra_taxonomies=extra_taxonomies)

    def to_dict(self) -> dict:
        """Canonical corpus file content with taxonomies inlined."""
        return {
            "taxonomy_refs": [
                tax.to_dict() for _, tax in sorted(self.taxonomies.items())
            ],
            "expertise_taxonomy": self.expertise_taxonomy,
            "location_taxonomy": self.location_taxonomy,
            "statements": [
                s.to_dict() for _, s in sorted(self.statements.items())
            ],
            "sources": [s.to_dict() for _, s in sorted(self.sources.items())],
            "testimony": [
                link.to_dict() for _, link in sorted(self.testimony.items())
            ],
            "arguments": [a.to_dict() for _, a in sorted(self.arguments.items())],
            "challenges": [c.to_dict() for _, c in sorted(self.challenges.items())],
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    def counts(self) -> dict[str, int]:
        return {
            "taxonomies": len(self.taxonomies),
            "statements": len(self.statements),
            "sources": len(self.sources),
            "testimony": len(self.testimony),
            "arguments": len(self.arguments),
            "challenges": len(self.challenges),
        }


class CorpusStore:
    """Single-writer, multi-reader holder of the current corpus snapshot."""

    def __init__(self, corpus: Corpus):
        self._lock = threading.Lock()
        self._corpus = corpus

    def snapshot(self) -> Corpus:
        return self._corpus

    def mutate(self, fn: Callable[[Corpus], Corpus]) -> Corpus:
        """Apply ``fn`` under the writer lock; on error nothing changes."""
        with self._lock:
            updated = fn(self._corpus)
            self._corpus = updated
            return updated
