"""Argumentation scheme definitions and instantiation checks.

A scheme is a reusable pattern of presumptive reasoning: named premise
slots, a conclusion template over those slots, and an ordered list of
critical questions. Each critical question names the evaluator the
credibility module runs for it; ``manual`` questions carry no rule and only
score through the challenge lifecycle.

Two schemes ship built in: argument from expert opinion (six critical
questions, rule-backed) and cause to effect (three manual questions).
Further schemes can be registered at runtime or loaded from a JSON file.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DuplicateScheme, InvalidDefinition, ParseError, UnknownScheme

SLOT_KINDS = frozenset({"source-ref", "concept-ref", "statement-ref", "free-text"})
EVALUATORS = frozenset({
    "expertise",
    "field",
    "opinion",
    "trustworthiness",
    "consistency",
    "backup_evidence",
    "manual",
})

_PLACEHOLDER = re.compile(r"\{([^{}]*)\}")


@dataclass(frozen=True)
class PremiseSlot:
    name: str
    kind: str


@dataclass(frozen=True)
class CriticalQuestion:
    cq_id: str
    label: str
    text: str
    evaluator: str


@dataclass(frozen=True)
class SchemeDefinition:
    id: str
    premises: tuple[PremiseSlot, ...]
    conclusion_template: str
    cqs: tuple[CriticalQuestion, ...]

    def validate(self) -> None:
        """Raise InvalidDefinition naming the first violated invariant."""
        if not self.id or not isinstance(self.id, str):
            raise InvalidDefinition("scheme id must be a non-empty string")
        if not self.premises:
            raise InvalidDefinition(f"scheme {self.id!r}: at least one premise required")
        if not self.cqs:
            raise InvalidDefinition(f"scheme {self.id!r}: at least one critical question required")
        names = [slot.name for slot in self.premises]
        if len(names) != len(set(names)):
            raise InvalidDefinition(f"scheme {self.id!r}: duplicate premise slot name")
        for slot in self.premises:
            if slot.kind not in SLOT_KINDS:
                raise InvalidDefinition(
                    f"scheme {self.id!r}: unknown slot kind {slot.kind!r} for {slot.name!r}"
                )
        for placeholder in _PLACEHOLDER.findall(self.conclusion_template):
            if placeholder not in names:
                raise InvalidDefinition(
                    f"scheme {self.id!r}: conclusion placeholder {placeholder!r} "
                    "names no premise slot"
                )
        cq_ids = [cq.cq_id for cq in self.cqs]
        if len(cq_ids) != len(set(cq_ids)):
            raise InvalidDefinition(f"scheme {self.id!r}: duplicate cq_id")
        for cq in self.cqs:
            if cq.evaluator not in EVALUATORS:
                raise InvalidDefinition(
                    f"scheme {self.id!r}: unknown evaluator {cq.evaluator!r} for {cq.cq_id}"
                )

    def slot_names(self) -> list[str]:
        return [slot.name for slot in self.premises]

    def slot_of_kind(self, kind: str) -> str | None:
        """Name of the first premise slot of the given kind, if any."""
        for slot in self.premises:
            if slot.kind == kind:
                return slot.name
        return None

    def cq(self, cq_id: str) -> CriticalQuestion | None:
        for cq in self.cqs:
            if cq.cq_id == cq_id:
                return cq
        return None

    def conclusion_text(self, fillers: Mapping[str, str]) -> str:
        return _PLACEHOLDER.sub(lambda m: str(fillers.get(m.group(1), m.group(0))),
                                self.conclusion_template)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "premises": [{"name": s.name, "kind": s.kind} for s in self.premises],
            "conclusion_template": self.conclusion_template,
            "cqs": [
                {"cq_id": c.cq_id, "label": c.label, "text": c.text,
                 "evaluator": c.evaluator}
                for c in self.cqs
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> SchemeDefinition:
        try:
            defn = cls(
                id=data["id"],
                premises=tuple(
                    PremiseSlot(p["name"], p["kind"]) for p in data["premises"]
                ),
                conclusion_template=data["conclusion_template"],
                cqs=tuple(
                    CriticalQuestion(c["cq_id"], c["label"], c["text"], c["evaluator"])
                    for c in data["cqs"]
                ),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed scheme definition: {exc}") from exc
        defn.validate()
        return defn


class SchemeRegistry:
    """Lookup table of scheme definitions, immutable once configured."""

    def __init__(self, definitions: Iterable[SchemeDefinition] = ()):
        self._defs: dict[str, SchemeDefinition] = {}
        for defn in definitions:
            self.register(defn)

    def register(self, defn: SchemeDefinition) -> SchemeRegistry:
        defn.validate()
        if defn.id in self._defs:
            raise DuplicateScheme(f"scheme {defn.id!r} already registered")
        self._defs[defn.id] = defn
        return self

    def get(self, scheme_id: str) -> SchemeDefinition:
        try:
            return self._defs[scheme_id]
        except KeyError:
            raise UnknownScheme(f"unknown scheme {scheme_id!r}") from None

    def contains(self, scheme_id: str) -> bool:
        return scheme_id in self._defs

    def ids(self) -> list[str]:
        return list(self._defs)

    def definitions(self) -> list[SchemeDefinition]:
        return list(self._defs.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, SchemeRegistry) and self._defs == other._defs


def validate_instantiation(defn: SchemeDefinition,
                           fillers: Mapping[str, str]) -> list[str]:
    """Check a fillers map against a scheme's premise slots.

    Returns the list of violations (empty means the instantiation is ok).
    Slot values must be non-empty strings; reference kinds are resolved
    against the corpus when an argument is stored, not here.
    """
    violations = []
    names = set(defn.slot_names())
    for slot in defn.premises:
        if slot.name not in fillers:
            violations.append(f"missing premise slot {slot.name!r}")
            continue
        value = fillers[slot.name]
        if not isinstance(value, str) or not value.strip():
            violations.append(
                f"premise slot {slot.name!r} needs a non-empty string value"
            )
    for extra in sorted(set(fillers) - names):
        violations.append(f"unknown premise slot {extra!r}")
    return violations


def builtin_registry() -> SchemeRegistry:
    """Registry with the shipped schemes: expert_opinion and cause_to_effect."""
    expert_opinion = SchemeDefinition(
        id="expert_opinion",
        premises=(
            PremiseSlot("expert", "source-ref"),
            PremiseSlot("domain", "concept-ref"),
            PremiseSlot("assertion", "statement-ref"),
        ),
        conclusion_template="{assertion} may plausibly be taken to be true.",
        cqs=(
            CriticalQuestion(
                "CQ1", "Expertise",
                "How credible is the cited expert as an expert source?",
                "expertise",
            ),
            CriticalQuestion(
                "CQ2", "Field",
                "Is the expert an authority in the field the assertion belongs to?",
                "field",
            ),
            CriticalQuestion(
                "CQ3", "Opinion",
                "Does the expert's testimony imply the assertion?",
                "opinion",
            ),
            CriticalQuestion(
                "CQ4", "Trustworthiness",
                "Is the expert personally reliable as a source?",
                "trustworthiness",
            ),
            CriticalQuestion(
                "CQ5", "Consistency",
                "Is the assertion consistent with the testimony of other experts?",
                "consistency",
            ),
            CriticalQuestion(
                "CQ6", "Backup Evidence",
                "Is the assertion supported by independent evidence?",
                "backup_evidence",
            ),
        ),
    )
    cause_to_effect = SchemeDefinition(
        id="cause_to_effect",
        premises=(
            PremiseSlot("cause", "statement-ref"),
            PremiseSlot("effect", "statement-ref"),
        ),
        conclusion_template="If {cause} occurs, then {effect} will plausibly occur.",
        cqs=(
            CriticalQuestion(
                "CQ1", "Generalization",
                "Is the causal generalization credible?",
                "manual",
            ),
            CriticalQuestion(
                "CQ2", "Alternative Cause",
                "Could the effect have another cause?",
                "manual",
            ),
            CriticalQuestion(
                "CQ3", "Correlation",
                "Is there a correlation-only confound?",
                "manual",
            ),
        ),
    )
    return SchemeRegistry([expert_opinion, cause_to_effect])


def load_schemes(path) -> list[SchemeDefinition]:
    """Load a scheme file: a JSON array of SchemeDefinition objects."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    if not isinstance(data, list):
        raise ParseError(f"{path}: scheme file must be a JSON array")
    return [SchemeDefinition.from_dict(item) for item in data]
