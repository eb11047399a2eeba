"""Critical-question evaluation and credibility aggregation.

Each critical question of an argument is scored to an objection degree in
[0, 1]; 1 means the premise survives the question. Degrees are exact
rationals internally and rounded to six decimal places (half-even) only at
the serialisation boundary. An argument's credibility is the arithmetic
mean of its evaluable degrees; an argument with no evaluable degree is
unrated rather than zero, since absent data is not evidence of weakness.

Rule-backed evaluators:

* expertise — 1 when the cited source's expertise covers the argument's
  domain (or a specialisation of it); otherwise the best field-closeness
  ratio between domain and any of the source's fields; 0 with no recorded
  expertise.
* field — 1 when the asserted statement's field is the domain or lies
  under it.
* consistency — the fraction of other domain experts on record who support
  the assertion; unrated when no other expert testified.

Presence checks (constructions, not rule-backed): opinion (the source's own
recorded testimony), trustworthiness (no reliability flags), backup_evidence
(evidence links attached). ``manual`` questions are unrated until someone
conveys them.

Conveying a critical question forces its degree to 0 until the challenge is
resolved; resolving restores the computed degree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

from .corpus import Argument, Corpus
from .schemes import CriticalQuestion

BASIS_RULE = "rule"
BASIS_CHALLENGE = "challenge-override"
BASIS_NOT_EVALUABLE = "not-evaluable"

_SIX_PLACES = Decimal("0.000001")


@dataclass(frozen=True)
class CqDegree:
    cq_id: str
    degree: Fraction | None
    basis: str
    trace: tuple[str, ...]


@dataclass(frozen=True)
class CredibilityReport:
    argument: str
    corpus_version: int
    cq_degrees: tuple[CqDegree, ...]
    credibility: Fraction | None


def degree_number(value: Fraction | None) -> float | None:
    """Decimal rounding to six fractional digits, half-even."""
    if value is None:
        return None
    quantized = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        _SIX_PLACES, rounding=ROUND_HALF_EVEN
    )
    return float(quantized)


def format_degree(value: Fraction | None) -> str:
    """Human form: integers bare, otherwise the six-digit decimal value."""
    if value is None:
        return "unrated"
    if value.denominator == 1:
        return str(value.numerator)
    return repr(degree_number(value))


def _slot_values(argument: Argument, corpus: Corpus):
    """Resolve the source/domain/assertion slots by their declared kinds."""
    defn = corpus.schemes.get(argument.scheme)
    source_slot = defn.slot_of_kind("source-ref")
    concept_slot = defn.slot_of_kind("concept-ref")
    statement_slot = defn.slot_of_kind("statement-ref")
    return (
        argument.fillers.get(source_slot) if source_slot else None,
        argument.fillers.get(concept_slot) if concept_slot else None,
        argument.fillers.get(statement_slot) if statement_slot else None,
    )


def eval_cq_expertise(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    source_id, domain, _ = _slot_values(argument, corpus)
    if source_id is None or domain is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        ("scheme has no source/domain slots to check",))
    source = corpus.sources[source_id]
    if not source.expertise:
        return CqDegree(cq_id, Fraction(0), BASIS_RULE,
                        (f"no recorded expertise for {source_id}",))
    tax = corpus.expertise_tax()
    best: Fraction | None = None
    best_field = None
    for concept in sorted(source.expertise):
        closeness = tax.field_closeness(domain, concept)
        if best is None or closeness > best:
            best, best_field = closeness, concept
    trace = [f"isExpertIn({source_id}, {best_field})"]
    if best != 1:
        trace.append(
            f"fieldCloseness({domain}, {best_field}) = "
            f"{best.numerator}/{best.denominator}"
        )
    return CqDegree(cq_id, best, BASIS_RULE, tuple(trace))


def eval_cq_field(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    _, domain, statement_id = _slot_values(argument, corpus)
    if domain is None or statement_id is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        ("scheme has no domain/assertion slots to check",))
    statement = corpus.statements[statement_id]
    if statement.field is None:
        return CqDegree(cq_id, Fraction(0), BASIS_RULE,
                        (f"no field recorded for {statement_id}",))
    field_tax, field_concept = statement.field
    if field_tax != corpus.expertise_taxonomy:
        return CqDegree(cq_id, Fraction(0), BASIS_RULE,
                        (f"field of {statement_id} is outside the expertise taxonomy",))
    tax = corpus.expertise_tax()
    if tax.is_subsumed_by(field_concept, domain):
        return CqDegree(cq_id, Fraction(1), BASIS_RULE,
                        (f"isPartOf({statement_id}, {field_concept})",))
    return CqDegree(
        cq_id, Fraction(0), BASIS_RULE,
        (f"isPartOf({statement_id}, {field_concept})",
         f"{field_concept} is not within {domain}"),
    )


def eval_cq_opinion(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    source_id, _, statement_id = _slot_values(argument, corpus)
    if source_id is None or statement_id is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        ("scheme has no source/assertion slots to check",))
    link = corpus.testimony.get((source_id, statement_id))
    if link is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        (f"no testimony by {source_id} on {statement_id}",))
    if link.polarity == "supports":
        return CqDegree(cq_id, Fraction(1), BASIS_RULE,
                        (f"supportsProposition({source_id}, {statement_id})",))
    return CqDegree(cq_id, Fraction(0), BASIS_RULE,
                    (f"nonsupportsProp({source_id}, {statement_id})",))


def eval_cq_trustworthiness(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    source_id, _, _ = _slot_values(argument, corpus)
    if source_id is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        ("scheme has no source slot to check",))
    source = corpus.sources[source_id]
    if source.unreliable_flags:
        return CqDegree(
            cq_id, Fraction(0), BASIS_RULE,
            tuple(f"flagged: {flag}" for flag in source.unreliable_flags),
        )
    return CqDegree(cq_id, Fraction(1), BASIS_RULE,
                    (f"no reliability flags for {source_id}",))


def eval_cq_consistency(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    source_id, domain, statement_id = _slot_values(argument, corpus)
    if domain is None or statement_id is None:
        return CqDegree(cq_id, None, BASIS_NOT_EVALUABLE,
                        ("scheme has no domain/assertion slots to check",))
    tax = corpus.expertise_tax()
    supporters = 0
    trace = []
    population = 0
    for link in corpus.testimony_on(statement_id):
        if link.source == source_id:
            continue  # consistency is judged against the testimony of others
        expert = corpus.sources[link.source]
        if not any(tax.is_subsumed_by(concept, domain)
                   for concept in expert.expertise):
            continue
        population += 1
        if link.polarity == "supports":
            supporters += 1
            trace.append(f"supportsProposition({link.source}, {statement_id})")
        else:
            trace.append(f"nonsupportsProp({link.source}, {statement_id})")
    if population == 0:
        return CqDegree(
            cq_id, None, BASIS_NOT_EVALUABLE,
            (f"no testimony from other {domain} experts on {statement_id}",),
        )
    trace.append(f"consensus: {supporters} of {population} domain experts support")
    return CqDegree(cq_id, Fraction(supporters, population), BASIS_RULE, tuple(trace))


def eval_cq_backup_evidence(argument: Argument, corpus: Corpus, cq_id: str) -> CqDegree:
    if argument.evidence_links:
        return CqDegree(
            cq_id, Fraction(1), BASIS_RULE,
            tuple(f"evidence: {link}" for link in argument.evidence_links),
        )
    return CqDegree(cq_id, Fraction(0), BASIS_RULE, ("no evidence links",))


_EVALUATORS = {
    "expertise": eval_cq_expertise,
    "field": eval_cq_field,
    "opinion": eval_cq_opinion,
    "trustworthiness": eval_cq_trustworthiness,
    "consistency": eval_cq_consistency,
    "backup_evidence": eval_cq_backup_evidence,
}


def evaluate_cq(argument: Argument, corpus: Corpus,
                cq: CriticalQuestion) -> CqDegree:
    """Score one critical question by its evaluator kind (no override)."""
    evaluator = _EVALUATORS.get(cq.evaluator)
    if evaluator is None:  # manual
        return CqDegree(cq.cq_id, None, BASIS_NOT_EVALUABLE,
                        ("manual question; scored only when conveyed",))
    return evaluator(argument, corpus, cq.cq_id)


def credibility(corpus: Corpus, argument_id: str) -> CredibilityReport:
    """Full report: per-CQ degrees in scheme order, open-challenge overrides
    applied, credibility as the mean of evaluable degrees."""
    argument = corpus.argument(argument_id)
    defn = corpus.schemes.get(argument.scheme)
    open_by_cq = corpus.open_challenges(argument_id)
    degrees = []
    for cq in defn.cqs:
        scored = evaluate_cq(argument, corpus, cq)
        challenge = open_by_cq.get(cq.cq_id)
        if challenge is not None:
            scored = CqDegree(
                cq.cq_id, Fraction(0), BASIS_CHALLENGE,
                (f"challenged by {challenge.raised_by} ({challenge.id})",),
            )
        degrees.append(scored)
    evaluable = [d.degree for d in degrees if d.degree is not None]
    mean = Fraction(sum(evaluable), len(evaluable)) if evaluable else None
    return CredibilityReport(
        argument=argument_id,
        corpus_version=corpus.version,
        cq_degrees=tuple(degrees),
        credibility=mean,
    )


def report_to_dict(report: CredibilityReport) -> dict:
    """The report's wire shape (degrees as six-digit decimals)."""
    return {
        "argument": report.argument,
        "corpus_version": report.corpus_version,
        "credibility": degree_number(report.credibility),
        "cqs": [
            {
                "cq_id": d.cq_id,
                "degree": degree_number(d.degree),
                "basis": d.basis,
                "trace": list(d.trace),
            }
            for d in report.cq_degrees
        ],
    }


def explain(report: CredibilityReport) -> str:
    """Deterministic human-readable trace of a report."""
    lines = [f"argument {report.argument} (corpus version {report.corpus_version})"]
    for entry in report.cq_degrees:
        marker = " [challenged]" if entry.basis == BASIS_CHALLENGE else ""
        facts = "; ".join(entry.trace)
        lines.append(f"{entry.cq_id}={format_degree(entry.degree)}{marker}: {facts}")
    if report.credibility is None:
        lines.append("credibility: unrated (no evaluable critical question)")
    else:
        lines.append(f"credibility: {format_degree(report.credibility)}")
    return "\n".join(lines)
