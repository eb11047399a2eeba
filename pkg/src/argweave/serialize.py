"""Canonical JSON payloads.

The CLI's ``--output json`` and the HTTP endpoints must produce
byte-identical bodies for the same snapshot, so both render through the
builders here and through one encoder: two-space indent, sorted keys,
UTF-8, trailing newline.
"""

from __future__ import annotations

import json

from .corpus import Argument, Corpus, format_utc
from .credibility import CredibilityReport, degree_number, report_to_dict
from .errors import UnknownTaxonomy
from .query import Query, print_query


def canonical_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def canonical_json_bytes(payload) -> bytes:
    return canonical_json(payload).encode("utf-8")


def report_payload(report: CredibilityReport) -> dict:
    return report_to_dict(report)


def query_payload(query: Query, corpus: Corpus, rows) -> dict:
    results = []
    for arg_id, score in rows:
        argument = corpus.arguments[arg_id]
        results.append({
            "argument": arg_id,
            "credibility": degree_number(score),
            "posted_at": format_utc(argument.posted_at),
            "author": argument.author,
        })
    return {
        "query": print_query(query),
        "corpus_version": corpus.version,
        "results": results,
    }


def argument_payload(argument: Argument) -> dict:
    return argument.to_dict()


def concept_payload(corpus: Corpus, taxonomy_name: str, concept: str) -> dict:
    if taxonomy_name not in corpus.taxonomies:
        raise UnknownTaxonomy(f"unknown taxonomy {taxonomy_name!r}")
    tax = corpus.taxonomies[taxonomy_name]
    return {
        "taxonomy": taxonomy_name,
        "id": concept,
        "label": tax.labels.get(concept),
        "path_to_root": tax.path_to_root(concept),
        "children": tax.children(concept),
        "corpus_version": corpus.version,
    }
