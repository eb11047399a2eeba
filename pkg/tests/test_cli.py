import json
import socket
import subprocess
import sys
import time

import httpx
import pytest

from argweave.cli import main
from argweave.corpus import Corpus
from argweave.schemes import builtin_registry


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIngest:
    def test_summary_line(self, capsys, debate_path):
        code, out, err = run(capsys, "ingest", "--corpus", str(debate_path))
        assert code == 0
        assert out == ("loaded: 3 taxonomies, 20 statements, 5 sources, "
                       "6 testimony links, 10 arguments, 0 challenges\n")
        assert err == ""

    def test_json_summary(self, capsys, debate_path):
        code, out, _ = run(capsys, "ingest", "--corpus", str(debate_path),
                           "--output", "json")
        assert code == 0
        body = json.loads(out)
        assert body["corpus_version"] == 1
        assert body["counts"]["arguments"] == 10

    def test_missing_corpus_flag_exits_1(self, capsys):
        code, _, err = run(capsys, "ingest")
        assert code == 1
        assert err.startswith("error:")
        assert "--corpus" in err

    def test_unreadable_file_exits_1(self, capsys, tmp_path):
        code, _, err = run(capsys, "ingest",
                           "--corpus", str(tmp_path / "absent.json"))
        assert code == 1
        assert err.startswith("error:")

    def test_dangling_reference_exits_1(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({
            "statements": [],
            "arguments": [{
                "id": "a1", "scheme": "cause_to_effect",
                "fillers": {"cause": "ghost", "effect": "ghost"},
                "conclusion": "ghost", "target_hypothesis": "ghost",
                "stance": "pro", "author": "x",
                "posted_at": "2010-11-01T00:00:00Z",
            }],
        }), encoding="utf-8")
        code, _, err = run(capsys, "ingest", "--corpus", str(path))
        assert code == 1
        assert "ghost" in err

    def test_bad_now_is_config_error(self, capsys, debate_path):
        code, _, err = run(capsys, "ingest", "--corpus", str(debate_path),
                           "--now", "not-a-time")
        assert code == 1
        assert err.startswith("error:")

    def test_extra_taxonomy_merges(self, capsys, debate_path, tmp_path):
        extra = tmp_path / "extra.json"
        extra.write_text(json.dumps({
            "name": "outcomes", "root": "Outcome",
            "edges": [["Outcome", "Recovery"]],
        }), encoding="utf-8")
        code, out, _ = run(capsys, "ingest", "--corpus", str(debate_path),
                           "--taxonomy", str(extra))
        assert code == 0
        assert out.startswith("loaded: 4 taxonomies")


class TestSchemesFlag:
    def test_custom_file_replaces_builtins(self, capsys, debate_path,
                                           tmp_path):
        path = tmp_path / "schemes.json"
        definitions = [d.to_dict()
                       for d in builtin_registry().definitions()]
        path.write_text(json.dumps(definitions), encoding="utf-8")
        code, out, _ = run(capsys, "ingest", "--corpus", str(debate_path),
                           "--schemes", str(path))
        assert code == 0
        assert out.startswith("loaded:")

    def test_missing_scheme_fails_load(self, capsys, debate_path, tmp_path):
        path = tmp_path / "schemes.json"
        only_causal = [d.to_dict()
                       for d in builtin_registry().definitions()
                       if d.id == "cause_to_effect"]
        path.write_text(json.dumps(only_causal), encoding="utf-8")
        code, _, err = run(capsys, "ingest", "--corpus", str(debate_path),
                           "--schemes", str(path))
        assert code == 1
        assert "expert_opinion" in err


class TestSave:
    def test_round_trips_through_canonical_file(self, capsys, debate_path,
                                                debate, tmp_path):
        out_path = tmp_path / "copy.json"
        code, out, _ = run(capsys, "save", "--corpus", str(debate_path),
                           str(out_path))
        assert code == 0
        assert out == f"saved: {out_path}\n"
        assert Corpus.load(out_path).content_equal(debate)

    def test_json_reports_counts(self, capsys, debate_path, tmp_path):
        out_path = tmp_path / "copy.json"
        code, out, _ = run(capsys, "save", "--corpus", str(debate_path),
                           "--output", "json", str(out_path))
        assert code == 0
        body = json.loads(out)
        assert body["path"] == str(out_path)
        assert body["counts"]["statements"] == 20

    def test_unwritable_destination_exits_1(self, capsys, debate_path,
                                            tmp_path):
        code, _, err = run(capsys, "save", "--corpus", str(debate_path),
                           str(tmp_path / "no" / "copy.json"))
        assert code == 1
        assert err.startswith("error:")


class TestCredibility:
    def test_text_explanation(self, capsys, debate_path):
        code, out, _ = run(capsys, "credibility",
                           "--corpus", str(debate_path), "eo1")
        assert code == 0
        assert "argument eo1 (corpus version 1)" in out
        assert "CQ1=1: isExpertIn(Jeffrey_P_Baker, Pediatrics)" in out
        assert "credibility: 1" in out

    def test_json_report_schema(self, capsys, debate_path):
        code, out, _ = run(capsys, "credibility",
                           "--corpus", str(debate_path),
                           "--output", "json", "eo1")
        assert code == 0
        assert out.endswith("\n")
        body = json.loads(out)
        assert body["argument"] == "eo1"
        assert body["credibility"] == 1.0
        assert [cq["cq_id"] for cq in body["cqs"]] \
            == ["CQ1", "CQ2", "CQ3", "CQ4", "CQ5", "CQ6"]

    def test_unknown_argument_exits_2(self, capsys, debate_path):
        code, out, err = run(capsys, "credibility",
                             "--corpus", str(debate_path), "nope")
        assert code == 2
        assert out == ""
        assert "unknown argument 'nope'" in err


class TestQuery:
    def test_text_output_lists_matches(self, capsys, debate_path):
        code, out, _ = run(
            capsys, "query", "--corpus", str(debate_path),
            'FIND ARGUMENTS WHERE location WITHIN Europe AND stance=con '
            'AND target="Genetic modified food"')
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("query: FIND ARGUMENTS WHERE")
        assert lines[1].startswith("gmf_de ")
        assert lines[-1] == "results: 1"

    def test_no_matches_is_success(self, capsys, debate_path):
        code, out, _ = run(capsys, "query", "--corpus", str(debate_path),
                           'FIND ARGUMENTS WHERE author="nobody"')
        assert code == 0
        assert out.splitlines()[-1] == "results: 0"

    def test_json_output(self, capsys, debate_path):
        code, out, _ = run(capsys, "query", "--corpus", str(debate_path),
                           "--output", "json",
                           'FIND ARGUMENTS WHERE author="nobody"')
        assert code == 0
        assert json.loads(out)["results"] == []

    def test_now_flag_resolves_relative_dates(self, capsys, debate_path):
        code, out, _ = run(capsys, "query", "--corpus", str(debate_path),
                           "--now", "2010-11-02T12:00:00Z", "--output", "json",
                           "FIND ARGUMENTS WHERE posted>=yesterday")
        assert code == 0
        body = json.loads(out)
        assert {r["argument"] for r in body["results"]} == {"eo1", "ce1"}
        assert "2010-11-01" in body["query"]

    def test_syntax_error_exits_2_with_position(self, capsys, debate_path):
        code, out, err = run(capsys, "query", "--corpus", str(debate_path),
                             "FIND NONSENSE")
        assert code == 2
        assert out == ""
        assert err.splitlines()[1] == "  at offset 5: expected ARGUMENTS"

    def test_unknown_concept_exits_2(self, capsys, debate_path):
        code, _, err = run(capsys, "query", "--corpus", str(debate_path),
                           "FIND ARGUMENTS WHERE location WITHIN Narnia")
        assert code == 2
        assert "Narnia" in err


class TestServe:
    def test_serves_http_until_killed(self, debate_path):
        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        process = subprocess.Popen(
            [sys.executable, "-m", "argweave.cli", "serve",
             "--corpus", str(debate_path),
             "--listen", f"127.0.0.1:{port}"],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        try:
            deadline = time.monotonic() + 15
            body = None
            while time.monotonic() < deadline:
                try:
                    body = httpx.get(
                        f"http://127.0.0.1:{port}/api/schemes",
                        timeout=1.0,
                    ).json()
                    break
                except httpx.HTTPError:
                    time.sleep(0.1)
            assert body is not None, "server never came up"
            assert len(body["schemes"]) == 2
        finally:
            process.terminate()
            process.wait(timeout=10)

    def test_bad_listen_address_is_config_error(self, capsys, debate_path):
        code, _, err = run(capsys, "serve", "--corpus", str(debate_path),
                           "--listen", "nonsense")
        assert code == 1
        assert "host:port" in err


@pytest.mark.parametrize("command", ["ingest", "credibility", "query"])
def test_every_command_requires_a_corpus(capsys, command):
    argv = [command]
    if command == "credibility":
        argv.append("eo1")
    if command == "query":
        argv.append("FIND ARGUMENTS WHERE stance=pro")
    code = main(argv)
    captured = capsys.readouterr()
    assert code == 1
    assert "no corpus given" in captured.err
