import json

import pytest
from fastapi.testclient import TestClient

from argweave.corpus import Corpus, CorpusStore
from argweave.fixtures import fixture_path
from argweave.serialize import canonical_json
from argweave.service import create_app


@pytest.fixture()
def store():
    return CorpusStore(Corpus.load(fixture_path("mmr_debate.json")))


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


def post_argument_body(arg_id="new1"):
    return {
        "id": arg_id,
        "scheme": "cause_to_effect",
        "fillers": {"cause": "s_mmr_shot", "effect": "s_autism_onset"},
        "conclusion": "hyp_mmr_autism",
        "target_hypothesis": "hyp_mmr_autism",
        "stance": "pro",
        "author": "poster",
        "posted_at": "2010-11-03T08:00:00Z",
    }


class TestReads:
    def test_schemes(self, client):
        body = client.get("/api/schemes").json()
        assert [s["id"] for s in body["schemes"]] == [
            "cause_to_effect", "expert_opinion",
        ]
        assert body["corpus_version"] == 1

    def test_taxonomies_listing(self, client):
        body = client.get("/api/taxonomies").json()
        assert [t["name"] for t in body["taxonomies"]] == [
            "expertise", "locations", "vaccine_ontology",
        ]

    def test_concept_lookup(self, client):
        body = client.get(
            "/api/taxonomies/vaccine_ontology/concepts/VO_0000731"
        ).json()
        assert len(body["path_to_root"]) == 8
        assert body["children"] == []
        assert body["label"] == "MMR vaccine"

    def test_unknown_taxonomy_404(self, client):
        response = client.get("/api/taxonomies/nope/concepts/X")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_taxonomy"

    def test_unknown_concept_404(self, client):
        response = client.get("/api/taxonomies/expertise/concepts/Astrology")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_concept"

    def test_arguments_listing_and_detail(self, client):
        listing = client.get("/api/arguments").json()
        assert len(listing["arguments"]) == 10
        detail = client.get("/api/arguments/eo1").json()
        assert detail["argument"]["author"] == "pediatrician_kate"

    def test_missing_argument_404(self, client):
        response = client.get("/api/arguments/missing")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_argument"

    def test_statements_listing(self, client):
        body = client.get("/api/statements").json()
        assert any(s["id"] == "Statement" for s in body["statements"])

    def test_equal_versions_mean_equal_bytes(self, client):
        first = client.get("/api/arguments/eo1/credibility")
        second = client.get("/api/arguments/eo1/credibility")
        assert first.content == second.content


class TestCredibilityEndpoints:
    def test_eo1_scores_one(self, client):
        body = client.get("/api/arguments/eo1/credibility").json()
        assert body["credibility"] == 1.0
        assert body["corpus_version"] == 1

    def test_challenge_drops_then_resolve_restores(self, client):
        created = client.post("/api/arguments/eo1/challenges", json={
            "cq_id": "CQ4", "raised_by": "skeptic",
            "raised_at": "2010-11-03T09:00:00Z",
        })
        assert created.status_code == 201
        challenge_id = created.json()["challenge"]["id"]
        assert client.get("/api/arguments/eo1/credibility").json()[
            "credibility"] == 0.8
        resolved = client.post(f"/api/challenges/{challenge_id}/resolve",
                               json={"note": "reviewed"})
        assert resolved.status_code == 200
        assert client.get("/api/arguments/eo1/credibility").json()[
            "credibility"] == 1.0

    def test_duplicate_open_challenge_409(self, client):
        client.post("/api/arguments/eo1/challenges",
                    json={"cq_id": "CQ4", "raised_by": "a"})
        second = client.post("/api/arguments/eo1/challenges",
                             json={"cq_id": "CQ4", "raised_by": "b"})
        assert second.status_code == 409
        assert second.json()["code"] == "duplicate_open_challenge"

    def test_unknown_cq_404(self, client):
        response = client.post("/api/arguments/eo1/challenges",
                               json={"cq_id": "CQ9", "raised_by": "a"})
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_cq"

    def test_resolve_twice_409(self, client):
        created = client.post("/api/arguments/eo1/challenges",
                              json={"cq_id": "CQ4", "raised_by": "a"})
        cid = created.json()["challenge"]["id"]
        client.post(f"/api/challenges/{cid}/resolve")
        again = client.post(f"/api/challenges/{cid}/resolve")
        assert again.status_code == 409
        assert again.json()["code"] == "already_resolved"


class TestMutations:
    def test_post_argument_appears_everywhere(self, client):
        response = client.post("/api/arguments", json=post_argument_body())
        assert response.status_code == 201
        body = response.json()
        assert body["corpus_version"] == 2
        fetched = client.get("/api/arguments/new1").json()
        assert fetched["argument"] == body["argument"]
        debate = client.get("/api/hypotheses/hyp_mmr_autism/debate").json()
        assert any(e["argument"]["id"] == "new1" for e in debate["pro"])

    def test_duplicate_post_is_atomic(self, client):
        client.post("/api/arguments", json=post_argument_body())
        before = client.get("/api/arguments").json()
        clash = client.post("/api/arguments", json=post_argument_body())
        assert clash.status_code == 409
        assert clash.json()["code"] == "duplicate_id"
        after = client.get("/api/arguments").json()
        assert after == before  # same version, same contents

    def test_invalid_argument_400(self, client):
        bad = post_argument_body("new2")
        bad["scheme"] = "argument_from_sign"
        response = client.post("/api/arguments", json=bad)
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_argument"

    def test_malformed_json_400(self, client):
        response = client.post("/api/arguments", content=b"{not json")
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_non_object_body_400(self, client):
        response = client.post("/api/query", content=b'["list"]')
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_missing_fields_400(self, client):
        response = client.post("/api/arguments/eo1/challenges", json={})
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"


class TestQueryEndpoint:
    def test_fixture_query(self, client):
        response = client.post("/api/query", json={
            "q": 'FIND ARGUMENTS WHERE location WITHIN Europe AND stance=con '
                 'AND target="Genetic modified food"',
        })
        body = response.json()
        assert [r["argument"] for r in body["results"]] == ["gmf_de"]
        assert body["query"].startswith("FIND ARGUMENTS WHERE")

    def test_relative_date_uses_request_now(self, client):
        response = client.post("/api/query", json={
            "q": "FIND ARGUMENTS WHERE posted>=yesterday",
            "now": "2010-11-02T12:00:00Z",
        })
        got = {r["argument"] for r in response.json()["results"]}
        assert got == {"eo1", "ce1"}

    def test_syntax_error_maps_to_400_with_offset(self, client):
        response = client.post("/api/query",
                               json={"q": "FIND ARGUMENTS WHERE target="})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "syntax_error"
        assert body["detail"]["offset"] == len("FIND ARGUMENTS WHERE target=")

    def test_unknown_concept_in_query_404(self, client):
        response = client.post("/api/query", json={
            "q": "FIND ARGUMENTS WHERE location WITHIN Narnia",
        })
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_concept"

    def test_empty_result_is_success(self, client):
        response = client.post("/api/query",
                               json={"q": 'FIND ARGUMENTS WHERE author="x"'})
        assert response.status_code == 200
        assert response.json()["results"] == []


class TestDebateBoard:
    def test_sides_and_ordering(self, client):
        body = client.get("/api/hypotheses/hyp_mmr_autism/debate").json()
        assert body["hypothesis"]["id"] == "hyp_mmr_autism"
        assert [e["argument"]["id"] for e in body["con"]] == ["eo1"]
        # rated argument before the unrated one on the pro side
        assert [e["argument"]["id"] for e in body["pro"]] == ["eo2", "ce1"]
        assert body["pro"][0]["credibility"] == 0.444444
        assert body["pro"][1]["credibility"] is None

    def test_challenged_cqs_surface(self, client):
        client.post("/api/arguments/eo1/challenges",
                    json={"cq_id": "CQ4", "raised_by": "skeptic"})
        body = client.get("/api/hypotheses/hyp_mmr_autism/debate").json()
        (entry,) = body["con"]
        assert entry["challenged_cqs"] == ["CQ4"]

    def test_unknown_hypothesis_404(self, client):
        response = client.get("/api/hypotheses/ghost/debate")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_statement"


class TestCorpusIo:
    def test_save_then_load_round_trip(self, client, tmp_path):
        path = str(tmp_path / "snapshot.json")
        saved = client.post("/api/corpus/save", json={"path": path})
        assert saved.status_code == 200
        assert saved.json()["counts"]["arguments"] == 10

        client.post("/api/arguments", json=post_argument_body())
        assert len(client.get("/api/arguments").json()["arguments"]) == 11

        loaded = client.post("/api/corpus/load", json={"path": path})
        assert loaded.status_code == 200
        assert loaded.json()["counts"]["arguments"] == 10
        # versions keep increasing across a reload
        assert loaded.json()["corpus_version"] == 3

    def test_load_missing_file_400(self, client, tmp_path):
        response = client.post("/api/corpus/load",
                               json={"path": str(tmp_path / "nope.json")})
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_save_to_bad_path_400(self, client, tmp_path):
        response = client.post("/api/corpus/save",
                               json={"path": str(tmp_path / "no" / "dir.json")})
        assert response.status_code == 400
        assert response.json()["code"] == "io_error"


class TestCanonicalBodies:
    def test_bodies_are_canonical_json(self, client):
        response = client.get("/api/arguments/eo1/credibility")
        assert response.content.decode("utf-8") \
            == canonical_json(json.loads(response.content))

    def test_error_bodies_are_canonical_too(self, client):
        response = client.get("/api/arguments/missing")
        assert response.content.decode("utf-8") \
            == canonical_json(json.loads(response.content))


class TestStaticUi:
    def test_ui_mounted_when_directory_given(self, store, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><p>board</p>",
                                             encoding="utf-8")
        client = TestClient(create_app(store, ui_dir=tmp_path))
        response = client.get("/ui/")
        assert response.status_code == 200
        assert "board" in response.text
