"""Release acceptance gate.

Each test here covers one shipped criterion end to end, with an explicit
wall-clock bound and, where randomness is involved, a fixed seed and a
pinned iteration count. Checks accumulate into a problem list so a run
always reaches its verdict line; every test prints exactly one

    [PASS] <criterion> (<elapsed>s / <bound>s)

line straight to the real stdout (capture suspended) and then asserts.
Numeric expectations are exact Fractions unless a tolerance is stated
inline; the only tolerance used is 1e-9 on the float form of the
field-closeness check, as published below.
"""

import json
import random
import time
from fractions import Fraction

from fastapi.testclient import TestClient

from argweave.cli import main
from argweave.corpus import Corpus, CorpusStore
from argweave.credibility import credibility
from argweave.fixtures import fixture_path
from argweave.query import evaluate, parse, print_query
from argweave.service import create_app
from argweave.taxonomy import Taxonomy

from .generators import random_corpus, random_printable_query, random_tree
from .generators import random_valid_query
from .oracles import oracle_closeness, oracle_credibility, oracle_query
from .oracles import parent_map
from .test_credibility import consensus_corpus

EXPERT_PRO_QUERY = (
    'FIND ARGUMENTS WHERE scheme=expert_opinion AND stance=pro AND '
    'target="Antibiotics are not recommended for pregnant women"'
)
AUTHOR_CON_QUERY = ('FIND ARGUMENTS WHERE author="Dr. Oz" AND stance=con '
                    'AND target="Eating meat"')
EUROPE_QUERY = ('FIND ARGUMENTS WHERE location WITHIN Europe AND stance=con '
                'AND target="Genetic modified food"')


def _verdict(capsys, name: str, bound_s: float, started: float,
             problems: list) -> None:
    elapsed = time.perf_counter() - started
    if elapsed > bound_s:
        problems.append(f"took {elapsed:.2f}s, bound {bound_s:g}s")
    status = "PASS" if not problems else "FAIL"
    with capsys.disabled():
        print(f"[{status}] {name} ({elapsed:.2f}s / {bound_s:g}s)",
              flush=True)
    assert not problems, f"{name}: " + "; ".join(str(p) for p in problems[:5])


def _check(problems: list, ok: bool, what: str) -> None:
    if not ok:
        problems.append(what)


def _degrees(corpus: Corpus, argument_id: str) -> dict:
    report = credibility(corpus, argument_id)
    return {d.cq_id: d.degree for d in report.cq_degrees}


def test_fixture_scenario_report(capsys):
    """Loading the debate fixture and scoring eo1 gives full marks on the
    expertise and field questions, with the deciding facts in the traces."""
    started = time.perf_counter()
    problems = []

    corpus = Corpus.load(fixture_path("mmr_debate.json"))
    report = credibility(corpus, "eo1")
    by_id = {d.cq_id: d for d in report.cq_degrees}
    _check(problems, by_id["CQ1"].degree == Fraction(1),
           f"CQ1 degree {by_id['CQ1'].degree!r}, wanted 1")
    _check(problems, by_id["CQ2"].degree == Fraction(1),
           f"CQ2 degree {by_id['CQ2'].degree!r}, wanted 1")
    _check(problems,
           "isExpertIn(Jeffrey_P_Baker, Pediatrics)" in by_id["CQ1"].trace,
           f"CQ1 trace missing expertise fact: {by_id['CQ1'].trace!r}")
    _check(problems,
           "isPartOf(Statement, Pediatrics)" in by_id["CQ2"].trace,
           f"CQ2 trace missing field fact: {by_id['CQ2'].trace!r}")

    _verdict(capsys, "fixture scenario report", 1.0, started, problems)


def test_field_closeness(capsys):
    """Sibling specialities under a shared parent score 2/3; closeness is
    reflexive-1 and stays in (0, 1] across 1,000 random trees."""
    started = time.perf_counter()
    problems = []

    tax = Taxonomy("expertise", "LifeSciences", {
        "Medicine": "LifeSciences",
        "Pediatrics": "Medicine",
        "Neurology": "Medicine",
    })
    got = tax.field_closeness("Pediatrics", "Neurology")
    _check(problems, got == Fraction(2, 3), f"closeness {got!r}, wanted 2/3")
    oracle = oracle_closeness(parent_map(tax), tax.root,
                              "Pediatrics", "Neurology")
    _check(problems, abs(float(got) - float(oracle)) < 1e-9,
           f"engine {float(got)} vs oracle {float(oracle)} beyond 1e-9")

    rng = random.Random(20260814)
    for n in range(1000):
        tree = random_tree(rng, max_nodes=50, prefix=f"N{n}_", name="t")
        parents = parent_map(tree)
        concepts = sorted(tree.concepts())
        l = rng.choice(concepts)
        e = rng.choice(concepts)
        if tree.field_closeness(l, l) != 1:
            problems.append(f"tree {n}: closeness({l},{l}) != 1")
            break
        value = tree.field_closeness(l, e)
        if not (0 < value <= 1):
            problems.append(f"tree {n}: closeness({l},{e}) = {value!r}")
            break
        if value != oracle_closeness(parents, tree.root, l, e):
            problems.append(f"tree {n}: closeness({l},{e}) disagrees "
                            "with path-enumeration oracle")
            break

    _verdict(capsys, "field closeness", 5.0, started, problems)


def test_consistency_ratio(capsys):
    """Of 8 other domain experts with testimony, 6 in favor scores 0.75;
    no testimony at all leaves the question unrated; a counting oracle
    agrees across 500 random corpora."""
    started = time.perf_counter()
    problems = []

    eight = consensus_corpus(population=8, supporting=6)
    degrees = _degrees(eight, "a1")
    _check(problems, degrees["CQ5"] == Fraction(3, 4),
           f"8/6 consensus gave {degrees['CQ5']!r}, wanted 3/4")

    empty = consensus_corpus(population=0, supporting=0)
    report = credibility(empty, "a1")
    cq5 = next(d for d in report.cq_degrees if d.cq_id == "CQ5")
    _check(problems, cq5.degree is None,
           f"empty population degree {cq5.degree!r}, wanted unrated")
    _check(problems, cq5.basis == "not-evaluable",
           f"empty population basis {cq5.basis!r}")

    rng = random.Random(20260815)
    for n in range(500):
        corpus = random_corpus(rng, max_sources=20)
        for arg_id, argument in corpus.arguments.items():
            if argument.scheme != "expert_opinion":
                continue
            expected, _ = oracle_credibility(corpus, arg_id)
            got = _degrees(corpus, arg_id)
            if got["CQ5"] != expected["CQ5"]:
                problems.append(
                    f"corpus {n} argument {arg_id}: CQ5 {got['CQ5']!r} "
                    f"vs oracle {expected['CQ5']!r}")
                break
        if problems:
            break

    _verdict(capsys, "consistency ratio", 10.0, started, problems)


def test_credibility_aggregation(capsys):
    """Reports match a naive oracle on 500 random corpora; lowering any
    single degree never raises the mean (1,000 sampled reports, plus the
    engine's own challenge path); the fixture challenge round moves eo1
    exactly 1 -> 4/5 -> 1."""
    started = time.perf_counter()
    problems = []

    rng = random.Random(20260816)
    sampled = 0
    corpus_index = 0
    while (corpus_index < 500 or sampled < 1000) and not problems:
        corpus = random_corpus(rng)
        corpus_index += 1
        for arg_id in corpus.arguments:
            report = credibility(corpus, arg_id)
            got = ({d.cq_id: d.degree for d in report.cq_degrees},
                   report.credibility)
            if corpus_index <= 500 and got != oracle_credibility(corpus, arg_id):
                problems.append(f"corpus {corpus_index} argument {arg_id}: "
                                "report disagrees with oracle")
                break

            if sampled >= 1000 or report.credibility is None:
                continue
            sampled += 1
            evaluable = [d.degree for d in report.cq_degrees
                         if d.degree is not None]
            mean = Fraction(sum(evaluable), len(evaluable))
            if mean != report.credibility:
                problems.append(f"argument {arg_id}: credibility is not the "
                                "mean of its evaluable degrees")
                break
            for k, degree in enumerate(evaluable):
                if degree == 0:
                    continue
                lowered = list(evaluable)
                lowered[k] = degree * Fraction(rng.randrange(0, 100), 100)
                if Fraction(sum(lowered), len(lowered)) > mean:
                    problems.append("lowering a degree raised the mean")
                    break

            # same property through the engine: a new challenge never helps
            challengeable = [d.cq_id for d in report.cq_degrees
                             if d.cq_id not in corpus.open_challenges(arg_id)]
            if challengeable:
                challenged, _ = corpus.convey_cq(
                    arg_id, rng.choice(challengeable), "gate", None)
                after = credibility(challenged, arg_id).credibility
                if after is not None and after > report.credibility:
                    problems.append(f"argument {arg_id}: challenging raised "
                                    "credibility")
                    break

    fixture = Corpus.load(fixture_path("mmr_debate.json"))
    if credibility(fixture, "eo1").credibility != Fraction(1):
        problems.append("fixture eo1 does not start at 1")
    challenged, challenge = fixture.convey_cq("eo1", "CQ4", "skeptic", None)
    if credibility(challenged, "eo1").credibility != Fraction(4, 5):
        problems.append("challenge on CQ4 did not move eo1 to exactly 4/5")
    restored = challenged.resolve_cq(challenge.id, "reviewed")
    if credibility(restored, "eo1").credibility != Fraction(1):
        problems.append("resolving the challenge did not restore exactly 1")

    _verdict(capsys, "credibility aggregation", 30.0, started, problems)


def test_query_engine(capsys):
    """The three debate-corpus example queries hit exactly their designed
    arguments (including the Germany-inside-Europe expansion); evaluation
    matches a naive filter oracle on 200 random corpora; 1,000 generated
    queries survive a parse/print round trip."""
    started = time.perf_counter()
    problems = []

    fixture = Corpus.load(fixture_path("mmr_debate.json"))
    for text, wanted in [
        (EXPERT_PRO_QUERY, ["eo_antibiotics"]),
        (AUTHOR_CON_QUERY, ["oz1"]),
        (EUROPE_QUERY, ["gmf_de"]),
    ]:
        got = [arg_id for arg_id, _ in evaluate(parse(text), fixture)]
        _check(problems, got == wanted, f"{text!r} -> {got}, wanted {wanted}")

    rng = random.Random(20260817)
    for n in range(200):
        corpus = random_corpus(rng, max_arguments=100)
        for _ in range(3):
            query = random_valid_query(rng, corpus)
            if evaluate(query, corpus) != oracle_query(corpus, query):
                problems.append(f"corpus {n}: {print_query(query)!r} "
                                "disagrees with the filter oracle")
                break
        if problems:
            break

    rng = random.Random(20260818)
    for n in range(1000):
        query = random_printable_query(rng)
        if parse(print_query(query)) != query:
            problems.append(f"round trip {n} failed: {print_query(query)!r}")
            break

    _verdict(capsys, "query engine", 30.0, started, problems)


def test_ontology_excerpt(capsys):
    """The vaccine-ontology excerpt is one 8-concept chain; an annotation
    query addressed to an ancestor concept finds the annotated argument."""
    started = time.perf_counter()
    problems = []

    corpus = Corpus.load(fixture_path("mmr_debate.json"))
    chain = corpus.taxonomies["vaccine_ontology"].path_to_root("VO_0000731")
    _check(problems, len(chain) == 8, f"chain length {len(chain)}, wanted 8")
    _check(problems, chain[0] == "Entity", f"chain starts at {chain[0]!r}")
    _check(problems, chain[-1] == "VO_0000731",
           f"chain ends at {chain[-1]!r}")

    rows = evaluate(parse("FIND ARGUMENTS WHERE annotated WITH MaterialEntity"),
                    corpus)
    got = [arg_id for arg_id, _ in rows]
    _check(problems, got == ["ce1"], f"annotation query -> {got}")

    _verdict(capsys, "ontology excerpt", 1.0, started, problems)


def test_facade_equivalence(capsys):
    """CLI JSON output and HTTP bodies are byte-identical for credibility
    and query at equal corpus versions."""
    started = time.perf_counter()
    problems = []

    path = str(fixture_path("mmr_debate.json"))
    client = TestClient(create_app(CorpusStore(Corpus.load(path))))

    code = main(["credibility", "--corpus", path, "--output", "json", "eo1"])
    cli_bytes = capsys.readouterr().out.encode("utf-8")
    _check(problems, code == 0, f"credibility exit code {code}")
    response = client.get("/api/arguments/eo1/credibility")
    _check(problems, json.loads(cli_bytes)["corpus_version"]
           == response.json()["corpus_version"], "corpus versions differ")
    _check(problems, cli_bytes == response.content,
           "credibility bytes differ between CLI and HTTP")

    code = main(["query", "--corpus", path, "--output", "json", EUROPE_QUERY])
    cli_bytes = capsys.readouterr().out.encode("utf-8")
    _check(problems, code == 0, f"query exit code {code}")
    response = client.post("/api/query", json={"q": EUROPE_QUERY})
    _check(problems, cli_bytes == response.content,
           "query bytes differ between CLI and HTTP")

    _verdict(capsys, "facade equivalence", 10.0, started, problems)
