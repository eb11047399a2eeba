"""HTTP/JSON facade over the engine.

The service adds no computation of its own: every endpoint parses input,
calls a corpus, credibility, or query function, and renders the result
through the canonical JSON encoder, so HTTP bodies are byte-identical to
the CLI's ``--output json`` for the same snapshot. Mutations go through
the store's writer lock and are atomic; a failed call leaves the corpus at
its previous version.

Error bodies are ``{"code", "message", "detail"}`` where ``code`` is one of
the engine error codes plus ``bad_request``, ``io_error``, and
``internal_error``. Unknown-entity codes map to 404, current-state
conflicts (duplicates, already-resolved) to 409, everything else
client-caused to 400.
"""

from __future__ import annotations

import json
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response

from .corpus import Argument, Corpus, CorpusStore, parse_utc
from .credibility import credibility, degree_number
from .errors import EngineError, QuerySyntaxError, UnknownStatement
from .query import Filter, Query, evaluate
from .query import parse as parse_query
from .query import resolve_relative_dates
from .serialize import (
    argument_payload,
    canonical_json_bytes,
    concept_payload,
    query_payload,
    report_payload,
)

DEFAULT_LISTEN = "127.0.0.1:8080"

_STATUS_BY_CODE = {
    "unknown_taxonomy": 404,
    "unknown_concept": 404,
    "unknown_scheme": 404,
    "unknown_argument": 404,
    "unknown_statement": 404,
    "unknown_source": 404,
    "unknown_cq": 404,
    "unknown_challenge": 404,
    "duplicate_id": 409,
    "duplicate_concept": 409,
    "duplicate_scheme": 409,
    "duplicate_open_challenge": 409,
    "already_resolved": 409,
    "conflicting_testimony": 409,
}


class BadRequest(Exception):
    """Client input that never reaches the engine: malformed JSON, wrong
    body shape, missing required fields."""


def parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise BadRequest(f"listen address must be host:port, got {value!r}")
    return host, int(port)


def _ok(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json_bytes(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, code: str, message: str, detail=None) -> Response:
    body = {"code": code, "message": message, "detail": detail}
    return Response(
        content=canonical_json_bytes(body),
        status_code=status_code,
        media_type="application/json",
    )


def _engine_error(exc: EngineError) -> Response:
    detail = None
    if isinstance(exc, QuerySyntaxError):
        detail = {"offset": exc.offset, "expected": exc.expected}
    return _error(_STATUS_BY_CODE.get(exc.code, 400), exc.code, str(exc), detail)


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BadRequest(f"malformed JSON body: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise BadRequest("request body must be a JSON object")
    return data


def _require_field(data: dict, key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        raise BadRequest(f"field {key!r} must be a non-empty string")
    return value


def _debate_side(corpus: Corpus, statement_id: str, stance: str) -> list[dict]:
    query = Query((Filter("target_id", statement_id), Filter("stance", stance)))
    entries = []
    for arg_id, score in evaluate(query, corpus):
        argument = corpus.arguments[arg_id]
        entries.append({
            "argument": argument_payload(argument),
            "credibility": degree_number(score),
            "conclusion_text": corpus.statements[argument.conclusion].text,
            "challenged_cqs": sorted(corpus.open_challenges(arg_id)),
        })
    return entries


def create_app(store: CorpusStore, ui_dir: Path | None = None) -> FastAPI:
    """Wire the endpoints around one corpus store."""
    app = FastAPI(title="argweave", docs_url=None, redoc_url=None,
                  openapi_url=None)

    @app.exception_handler(EngineError)
    async def on_engine_error(request: Request, exc: EngineError) -> Response:
        return _engine_error(exc)

    @app.exception_handler(BadRequest)
    async def on_bad_request(request: Request, exc: BadRequest) -> Response:
        return _error(400, "bad_request", str(exc))

    @app.exception_handler(Exception)
    async def on_crash(request: Request, exc: Exception) -> Response:
        return _error(500, "internal_error", f"{type(exc).__name__}: {exc}")

    # -- read side -----------------------------------------------------------

    @app.get("/api/schemes")
    def get_schemes() -> Response:
        corpus = store.snapshot()
        definitions = sorted(corpus.schemes.definitions(), key=lambda d: d.id)
        return _ok({
            "corpus_version": corpus.version,
            "schemes": [d.to_dict() for d in definitions],
        })

    @app.get("/api/taxonomies")
    def get_taxonomies() -> Response:
        corpus = store.snapshot()
        return _ok({
            "corpus_version": corpus.version,
            "taxonomies": [
                {"name": name, "root": tax.root, "concepts": len(tax.concepts())}
                for name, tax in sorted(corpus.taxonomies.items())
            ],
        })

    @app.get("/api/taxonomies/{name}/concepts/{concept_id}")
    def get_concept(name: str, concept_id: str) -> Response:
        return _ok(concept_payload(store.snapshot(), name, concept_id))

    @app.get("/api/statements")
    def get_statements() -> Response:
        corpus = store.snapshot()
        return _ok({
            "corpus_version": corpus.version,
            "statements": [
                statement.to_dict()
                for _, statement in sorted(corpus.statements.items())
            ],
        })

    @app.get("/api/arguments")
    def get_arguments() -> Response:
        corpus = store.snapshot()
        return _ok({
            "corpus_version": corpus.version,
            "arguments": [
                argument_payload(argument)
                for _, argument in sorted(corpus.arguments.items())
            ],
        })

    @app.get("/api/arguments/{argument_id}")
    def get_argument(argument_id: str) -> Response:
        corpus = store.snapshot()
        return _ok({
            "corpus_version": corpus.version,
            "argument": argument_payload(corpus.argument(argument_id)),
        })

    @app.get("/api/arguments/{argument_id}/credibility")
    def get_credibility(argument_id: str) -> Response:
        return _ok(report_payload(credibility(store.snapshot(), argument_id)))

    @app.get("/api/hypotheses/{statement_id}/debate")
    def get_debate(statement_id: str) -> Response:
        corpus = store.snapshot()
        if statement_id not in corpus.statements:
            raise UnknownStatement(f"unknown statement {statement_id!r}")
        return _ok({
            "corpus_version": corpus.version,
            "hypothesis": corpus.statements[statement_id].to_dict(),
            "pro": _debate_side(corpus, statement_id, "pro"),
            "con": _debate_side(corpus, statement_id, "con"),
        })

    # -- write side ------------------------------------------------------------

    @app.post("/api/arguments")
    async def post_argument(request: Request) -> Response:
        data = await _json_body(request)
        argument = Argument.from_dict(data)
        updated = store.mutate(lambda corpus: corpus.add_argument(argument))
        return _ok({
            "corpus_version": updated.version,
            "argument": argument_payload(argument),
        }, status_code=201)

    @app.post("/api/arguments/{argument_id}/challenges")
    async def post_challenge(argument_id: str, request: Request) -> Response:
        data = await _json_body(request)
        cq_id = _require_field(data, "cq_id")
        raised_by = _require_field(data, "raised_by")
        raised_at = data.get("raised_at")
        moment = parse_utc(raised_at) if raised_at is not None else None
        created = {}

        def apply(corpus: Corpus) -> Corpus:
            updated, challenge = corpus.convey_cq(
                argument_id, cq_id, raised_by, moment
            )
            created["challenge"] = challenge
            return updated

        updated = store.mutate(apply)
        return _ok({
            "corpus_version": updated.version,
            "challenge": created["challenge"].to_dict(),
        }, status_code=201)

    @app.post("/api/challenges/{challenge_id}/resolve")
    async def post_resolve(challenge_id: str, request: Request) -> Response:
        data = await _json_body(request)
        note = data.get("note")
        if note is not None and not isinstance(note, str):
            raise BadRequest("field 'note' must be a string")
        updated = store.mutate(
            lambda corpus: corpus.resolve_cq(challenge_id, note)
        )
        return _ok({
            "corpus_version": updated.version,
            "challenge": updated.challenges[challenge_id].to_dict(),
        })

    @app.post("/api/query")
    async def post_query(request: Request) -> Response:
        data = await _json_body(request)
        text = _require_field(data, "q")
        raw_now = data.get("now")
        if raw_now is not None and not isinstance(raw_now, str):
            raise BadRequest("field 'now' must be an ISO datetime string")
        now = parse_utc(raw_now) if raw_now else datetime.now(timezone.utc)
        query = parse_query(resolve_relative_dates(text, now))
        corpus = store.snapshot()
        return _ok(query_payload(query, corpus, evaluate(query, corpus)))

    @app.post("/api/corpus/save")
    async def post_save(request: Request) -> Response:
        data = await _json_body(request)
        path = _require_field(data, "path")
        corpus = store.snapshot()
        try:
            corpus.save(path)
        except OSError as exc:
            return _error(400, "io_error", f"cannot write {path!r}: {exc}")
        return _ok({
            "corpus_version": corpus.version,
            "path": path,
            "counts": corpus.counts(),
        })

    @app.post("/api/corpus/load")
    async def post_load(request: Request) -> Response:
        data = await _json_body(request)
        path = _require_field(data, "path")

        def apply(current: Corpus) -> Corpus:
            try:
                loaded = Corpus.load(path, schemes=current.schemes)
            except OSError as exc:
                raise BadRequest(f"cannot read {path!r}: {exc}") from exc
            # versions stay monotone across reloads
            return replace(loaded, version=current.version + 1)

        updated = store.mutate(apply)
        return _ok({
            "corpus_version": updated.version,
            "path": path,
            "counts": updated.counts(),
        })

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app


def serve(store: CorpusStore, listen: str = DEFAULT_LISTEN,
          ui_dir: Path | None = None) -> None:
    """Run the facade until interrupted."""
    import uvicorn

    host, port = parse_listen(listen)
    uvicorn.run(create_app(store, ui_dir), host=host, port=port,
                log_level="warning")
