"""Conjunctive query language over the argument corpus.

Grammar (keywords case-insensitive)::

    FIND ARGUMENTS WHERE <cond> {AND <cond>}* [ORDER BY credibility|posted] [LIMIT n]

    cond := scheme=ID | stance=pro|con | target="..."|ID | author="..."
          | location WITHIN ID | posted>=DATE | posted<DATE
          | annotated WITH ID

Location and annotation filters are subsumption-aware: ``WITHIN Europe``
matches everything located at Europe or any narrower concept, and
``annotated WITH`` a broad concept matches arguments annotated with any of
its specialisations. Dates are absolute ISO-8601; relative words like
"yesterday" are resolved by the caller against an injected clock before the
engine sees the text (see ``resolve_relative_dates``).

Filters conjoin; results are ordered by credibility descending (unrated
last, ties by most recent post then id) unless ``ORDER BY posted`` asks for
recency order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, time, timedelta, timezone
from fractions import Fraction

from .corpus import Corpus, format_utc, parse_utc
from .credibility import credibility
from .errors import (
    AmbiguousConcept,
    ParseError,
    QuerySyntaxError,
    UnknownConcept,
)

ORDER_CREDIBILITY = "credibility-desc"
ORDER_POSTED = "posted-desc"

_WORD = re.compile(r"[A-Za-z0-9_.:+-]+")
_FILTER_KEYS = ("scheme", "stance", "target", "author", "location", "posted",
                "annotated")


@dataclass(frozen=True)
class Token:
    kind: str  # word | string | op | eof
    value: str
    start: int
    end: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    length = len(text)
    while pos < length:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == '"':
            out = []
            cursor = pos + 1
            while cursor < length and text[cursor] != '"':
                if text[cursor] == "\\" and cursor + 1 < length:
                    cursor += 1
                out.append(text[cursor])
                cursor += 1
            if cursor >= length:
                raise QuerySyntaxError(
                    f"unterminated string at offset {pos}", pos, 'closing "'
                )
            tokens.append(Token("string", "".join(out), pos, cursor + 1))
            pos = cursor + 1
            continue
        if text.startswith(">=", pos):
            tokens.append(Token("op", ">=", pos, pos + 2))
            pos += 2
            continue
        if ch in "=<":
            tokens.append(Token("op", ch, pos, pos + 1))
            pos += 1
            continue
        match = _WORD.match(text, pos)
        if match:
            tokens.append(Token("word", match.group(0), pos, match.end()))
            pos = match.end()
            continue
        raise QuerySyntaxError(
            f"unexpected character {ch!r} at offset {pos}", pos, "a filter term"
        )
    tokens.append(Token("eof", "", length, length))
    return tokens


@dataclass(frozen=True)
class Filter:
    """One conjunct. ``key`` is one of scheme, stance, target_id,
    target_text, author, location_within, posted_ge, posted_lt,
    annotated_with; posted values are UTC datetimes."""

    key: str
    value: object


@dataclass(frozen=True)
class Query:
    filters: tuple[Filter, ...]
    order_by: str = ORDER_CREDIBILITY
    limit: int | None = None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, expected: str, token: Token | None = None):
        token = token or self.peek()
        shown = token.value if token.kind != "eof" else "end of query"
        raise QuerySyntaxError(
            f"expected {expected} at offset {token.start}, got {shown!r}",
            token.start, expected,
        )

    def expect_keyword(self, keyword: str) -> Token:
        token = self.peek()
        if token.kind != "word" or token.value.lower() != keyword:
            self.fail(keyword.upper())
        return self.advance()

    def keyword_ahead(self, keyword: str) -> bool:
        token = self.peek()
        return token.kind == "word" and token.value.lower() == keyword

    def expect_op(self, op: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.value != op:
            self.fail(f"'{op}'")
        return self.advance()

    def expect_word(self, expected: str) -> Token:
        token = self.peek()
        if token.kind != "word":
            self.fail(expected)
        return self.advance()

    def parse(self) -> Query:
        self.expect_keyword("find")
        self.expect_keyword("arguments")
        self.expect_keyword("where")
        filters = [self.condition()]
        while self.keyword_ahead("and"):
            self.advance()
            filters.append(self.condition())
        order_by = ORDER_CREDIBILITY
        if self.keyword_ahead("order"):
            self.advance()
            self.expect_keyword("by")
            token = self.expect_word("'credibility' or 'posted'")
            kind = token.value.lower()
            if kind not in ("credibility", "posted"):
                self.fail("'credibility' or 'posted'", token)
            if self.keyword_ahead("desc"):
                self.advance()
            order_by = ORDER_POSTED if kind == "posted" else ORDER_CREDIBILITY
        limit = None
        if self.keyword_ahead("limit"):
            self.advance()
            token = self.expect_word("a positive integer")
            if not token.value.isdigit() or int(token.value) < 1:
                self.fail("a positive integer", token)
            limit = int(token.value)
        if self.peek().kind != "eof":
            self.fail("AND, ORDER BY, LIMIT or end of query")
        self._check_duplicates(filters)
        return Query(tuple(filters), order_by, limit)

    def condition(self) -> Filter:
        token = self.peek()
        if token.kind != "word":
            self.fail("a filter key " + str(_FILTER_KEYS))
        key = token.value.lower()
        if key == "scheme":
            self.advance()
            self.expect_op("=")
            return Filter("scheme", self.expect_word("a scheme id").value)
        if key == "stance":
            self.advance()
            self.expect_op("=")
            value_token = self.expect_word("'pro' or 'con'")
            stance = value_token.value.lower()
            if stance not in ("pro", "con"):
                self.fail("'pro' or 'con'", value_token)
            return Filter("stance", stance)
        if key == "target":
            self.advance()
            self.expect_op("=")
            value_token = self.peek()
            if value_token.kind == "string":
                self.advance()
                return Filter("target_text", value_token.value)
            if value_token.kind == "word":
                self.advance()
                return Filter("target_id", value_token.value)
            self.fail("a quoted text or statement id", value_token)
        if key == "author":
            self.advance()
            self.expect_op("=")
            value_token = self.peek()
            if value_token.kind in ("string", "word"):
                self.advance()
                return Filter("author", value_token.value)
            self.fail("an author name", value_token)
        if key == "location":
            self.advance()
            self.expect_keyword("within")
            return Filter("location_within", self.expect_word("a concept id").value)
        if key == "posted":
            self.advance()
            op_token = self.peek()
            if op_token.kind != "op" or op_token.value not in (">=", "<"):
                self.fail("'>=' or '<'", op_token)
            self.advance()
            date_token = self.expect_word("an ISO date")
            moment = self._parse_date(date_token)
            return Filter("posted_ge" if op_token.value == ">=" else "posted_lt",
                          moment)
        if key == "annotated":
            self.advance()
            self.expect_keyword("with")
            return Filter("annotated_with", self.expect_word("a concept id").value)
        self.fail("a filter key " + str(_FILTER_KEYS))

    def _parse_date(self, token: Token) -> datetime:
        try:
            return parse_utc(token.value)
        except ParseError:
            self.fail("an ISO date like 2010-11-02 or 2010-11-02T10:00:00Z", token)

    def _check_duplicates(self, filters: list[Filter]) -> None:
        seen: dict[str, int] = {}
        for item in filters:
            key = item.key
            if key in ("target_id", "target_text"):
                key = "target"
            seen[key] = seen.get(key, 0) + 1
        for key, count in seen.items():
            if count > 1:
                raise QuerySyntaxError(
                    f"duplicate filter key {key!r}", 0, "each key at most once"
                )


def parse(text: str) -> Query:
    """Parse query text; raises QuerySyntaxError with offset and hint."""
    return _Parser(text).parse()


def _print_date(moment: datetime) -> str:
    at_utc = moment.astimezone(timezone.utc)
    if at_utc.timetz() == time(0, 0, tzinfo=timezone.utc):
        return at_utc.date().isoformat()
    return format_utc(at_utc)


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def print_query(query: Query) -> str:
    """Canonical text form; parse(print_query(q)) == q."""
    terms = []
    for item in query.filters:
        if item.key == "scheme":
            terms.append(f"scheme={item.value}")
        elif item.key == "stance":
            terms.append(f"stance={item.value}")
        elif item.key == "target_id":
            terms.append(f"target={item.value}")
        elif item.key == "target_text":
            terms.append(f"target={_quote(item.value)}")
        elif item.key == "author":
            terms.append(f"author={_quote(item.value)}")
        elif item.key == "location_within":
            terms.append(f"location WITHIN {item.value}")
        elif item.key == "posted_ge":
            terms.append(f"posted>={_print_date(item.value)}")
        elif item.key == "posted_lt":
            terms.append(f"posted<{_print_date(item.value)}")
        elif item.key == "annotated_with":
            terms.append(f"annotated WITH {item.value}")
        else:
            raise ValueError(f"unprintable filter {item!r}")
    text = "FIND ARGUMENTS WHERE " + " AND ".join(terms)
    if query.order_by == ORDER_POSTED:
        text += " ORDER BY posted"
    if query.limit is not None:
        text += f" LIMIT {query.limit}"
    return text


def _normalize_text(value: str) -> str:
    return " ".join(value.split()).casefold()


def _resolve_concept(corpus: Corpus, concept: str) -> tuple[str, set[str]]:
    """Find the unique taxonomy holding ``concept``; return its descendant set."""
    hits = [name for name, tax in sorted(corpus.taxonomies.items())
            if tax.contains(concept)]
    if not hits:
        raise UnknownConcept(f"unknown concept {concept!r}")
    if len(hits) > 1:
        raise AmbiguousConcept(
            f"concept {concept!r} exists in several taxonomies: {hits}"
        )
    name = hits[0]
    return name, corpus.taxonomies[name].descendants(concept)


def expand_concept(corpus: Corpus, concept: str) -> set[str]:
    """All concepts subsumed by ``concept`` (searched across taxonomies)."""
    _, descendants = _resolve_concept(corpus, concept)
    return descendants


def _compile(corpus: Corpus, item: Filter):
    if item.key == "scheme":
        corpus.schemes.get(item.value)  # raises UnknownScheme
        return lambda arg: arg.scheme == item.value
    if item.key == "stance":
        return lambda arg: arg.stance == item.value
    if item.key == "target_id":
        return lambda arg: arg.target_hypothesis == item.value
    if item.key == "target_text":
        wanted = _normalize_text(item.value)
        return lambda arg: _normalize_text(
            corpus.statements[arg.target_hypothesis].text) == wanted
    if item.key == "author":
        return lambda arg: arg.author == item.value
    if item.key == "location_within":
        tax = corpus.taxonomies.get(corpus.location_taxonomy)
        if tax is None or not tax.contains(item.value):
            raise UnknownConcept(
                f"unknown concept {item.value!r} in the location taxonomy"
            )
        allowed = tax.descendants(item.value)
        return lambda arg: arg.author_location in allowed
    if item.key == "posted_ge":
        return lambda arg: arg.posted_at >= item.value
    if item.key == "posted_lt":
        return lambda arg: arg.posted_at < item.value
    if item.key == "annotated_with":
        tax_name, allowed = _resolve_concept(corpus, item.value)
        wanted = {(tax_name, concept) for concept in allowed}
        return lambda arg: any(ref in wanted for ref in arg.annotations)
    raise ValueError(f"unknown filter key {item.key!r}")


def evaluate(query: Query, corpus: Corpus) -> list[tuple[str, Fraction | None]]:
    """Run a query against a snapshot.

    Returns (argument id, credibility) pairs satisfying every filter, in
    the query's order: credibility descending with unrated last (ties by
    posted_at descending, then id ascending), or posted_at descending.
    """
    predicates = [_compile(corpus, item) for item in query.filters]
    rows = []
    for arg_id in sorted(corpus.arguments):
        argument = corpus.arguments[arg_id]
        if all(pred(argument) for pred in predicates):
            score = credibility(corpus, arg_id).credibility
            rows.append((arg_id, score, argument.posted_at))

    if query.order_by == ORDER_POSTED:
        rows.sort(key=lambda row: (-row[2].timestamp(), row[0]))
    else:
        rows.sort(key=lambda row: (
            row[1] is None,
            -(row[1] if row[1] is not None else Fraction(0)),
            -row[2].timestamp(),
            row[0],
        ))
    if query.limit is not None:
        rows = rows[:query.limit]
    return [(arg_id, score) for arg_id, score, _ in rows]


_RELATIVE_WORDS = ("yesterday", "today")


def resolve_relative_dates(text: str, now: datetime) -> str:
    """Replace bare yesterday/today words with absolute dates from ``now``.

    Quoted strings are left untouched. Lexing errors are ignored here so
    ``parse`` can report them with correct offsets.
    """
    try:
        tokens = _tokenize(text)
    except QuerySyntaxError:
        return text
    today = now.astimezone(timezone.utc).date()
    values = {"yesterday": (today - timedelta(days=1)).isoformat(),
              "today": today.isoformat()}
    pieces = []
    cursor = 0
    for token in tokens:
        if token.kind == "word" and token.value.lower() in values:
            pieces.append(text[cursor:token.start])
            pieces.append(values[token.value.lower()])
            cursor = token.end
    pieces.append(text[cursor:])
    return "".join(pieces)
