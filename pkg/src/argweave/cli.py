"""Command-line front end.

Dispatch is single-threaded: load the corpus, run one command, exit.
``--output json`` renders through the same canonical encoder as the HTTP
service, so the bytes printed for credibility and query match the
corresponding endpoint bodies at the same corpus version. Text output is
for humans and carries no stability promise.

Exit codes: 0 success, 1 load or configuration error, 2 domain error
(unknown id, query syntax).
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

from .corpus import Corpus, CorpusStore, format_utc, parse_utc
from .credibility import credibility, explain, format_degree
from .errors import EngineError, QuerySyntaxError
from .query import evaluate, parse as parse_query, print_query, resolve_relative_dates
from .schemes import SchemeRegistry, builtin_registry, load_schemes
from .serialize import canonical_json, query_payload, report_payload
from .service import DEFAULT_LISTEN, BadRequest, parse_listen, serve
from .taxonomy import load_taxonomies


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", metavar="PATH",
                        help="corpus file to load")
    common.add_argument("--taxonomy", metavar="PATH", action="append",
                        default=[], dest="taxonomies",
                        help="extra taxonomy file (repeatable)")
    common.add_argument("--schemes", metavar="PATH",
                        help="scheme definitions file (default: built-ins)")
    common.add_argument("--output", choices=("text", "json"), default="text",
                        help="output format (default: text)")
    common.add_argument("--now", metavar="ISO",
                        help="clock override for relative dates")

    parser = argparse.ArgumentParser(
        prog="argweave",
        description="Structured-argumentation corpus tool.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[common],
                   help="load and validate a corpus, print a summary")

    p_save = sub.add_parser("save", parents=[common],
                            help="write the corpus back in canonical form")
    p_save.add_argument("out", metavar="OUT", help="destination file")

    p_cred = sub.add_parser("credibility", parents=[common],
                            help="evaluate one argument's critical questions")
    p_cred.add_argument("argument_id", metavar="ARGUMENT")

    p_query = sub.add_parser("query", parents=[common],
                             help="run a FIND ARGUMENTS query")
    p_query.add_argument("text", metavar="QUERY")

    p_serve = sub.add_parser("serve", parents=[common],
                             help="run the HTTP service until interrupted")
    p_serve.add_argument("--listen", metavar="HOST:PORT",
                         default=os.environ.get("ARGWEAVE_LISTEN",
                                                DEFAULT_LISTEN))
    p_serve.add_argument("--ui", metavar="DIR", default=None,
                         help="static files to serve under /ui/")
    return parser


def _load_registry(args) -> SchemeRegistry:
    if args.schemes:
        return SchemeRegistry(load_schemes(args.schemes))
    return builtin_registry()


def _load_corpus(args) -> Corpus:
    if not args.corpus:
        raise EngineError("no corpus given (use --corpus PATH)")
    extra = load_taxonomies(args.taxonomies) if args.taxonomies else None
    return Corpus.load(args.corpus, schemes=_load_registry(args),
                       extra_taxonomies=extra)


def _now(args) -> datetime:
    if args.now:
        return parse_utc(args.now)
    return datetime.now(timezone.utc)


def _plural(count: int, noun: str, plural: str | None = None) -> str:
    word = noun if count == 1 else (plural or noun + "s")
    return f"{count} {word}"


def cmd_ingest(args, corpus: Corpus) -> int:
    if args.output == "json":
        sys.stdout.write(canonical_json({
            "corpus_version": corpus.version,
            "counts": corpus.counts(),
        }))
        return 0
    c = corpus.counts()
    print("loaded: " + ", ".join([
        _plural(c["taxonomies"], "taxonomy", "taxonomies"),
        _plural(c["statements"], "statement"),
        _plural(c["sources"], "source"),
        _plural(c["testimony"], "testimony link"),
        _plural(c["arguments"], "argument"),
        _plural(c["challenges"], "challenge"),
    ]))
    return 0


def cmd_save(args, corpus: Corpus) -> int:
    corpus.save(args.out)
    if args.output == "json":
        sys.stdout.write(canonical_json({
            "corpus_version": corpus.version,
            "path": args.out,
            "counts": corpus.counts(),
        }))
    else:
        print(f"saved: {args.out}")
    return 0


def cmd_credibility(args, corpus: Corpus) -> int:
    report = credibility(corpus, args.argument_id)
    if args.output == "json":
        sys.stdout.write(canonical_json(report_payload(report)))
    else:
        print(explain(report))
    return 0


def cmd_query(args, corpus: Corpus) -> int:
    text = resolve_relative_dates(args.text, _now(args))
    query = parse_query(text)
    rows = evaluate(query, corpus)
    if args.output == "json":
        sys.stdout.write(canonical_json(query_payload(query, corpus, rows)))
        return 0
    print(f"query: {print_query(query)}")
    for arg_id, score in rows:
        argument = corpus.arguments[arg_id]
        print(f"{arg_id}  credibility={format_degree(score)}  "
              f"posted={format_utc(argument.posted_at)}  "
              f"author={argument.author}")
    print(f"results: {len(rows)}")
    return 0


def cmd_serve(args, corpus: Corpus) -> int:
    try:
        parse_listen(args.listen)  # a bad address is a config error
    except BadRequest as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ui_dir = args.ui if args.ui else None
    try:
        serve(CorpusStore(corpus), listen=args.listen, ui_dir=ui_dir)
    except KeyboardInterrupt:
        pass
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "save": cmd_save,
    "credibility": cmd_credibility,
    "query": cmd_query,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    # phase one: configuration and corpus load; failures exit 1
    try:
        if args.now:
            _now(args)  # validate early; a bad clock is a config error
        corpus = _load_corpus(args)
    except (EngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    # phase two: the command itself; engine failures are domain errors
    try:
        return _COMMANDS[args.command](args, corpus)
    except QuerySyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.expected:
            print(f"  at offset {exc.offset}: expected {exc.expected}",
                  file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
