import pytest
from fastapi.testclient import TestClient

from siteqa.service import create_app


@pytest.fixture()
def client(site_data):
    return TestClient(create_app(site_data))


def test_qa_valid_question_shape(client):
    response = client.get("/qa", params={"question": "What's the capital of Italy?"})
    assert response.status_code == 200
    body = response.json()
    assert set(body) >= {"question", "branch", "confidence", "interpretation",
                         "answers", "low_confidence", "presentation"}
    assert body["branch"] in ("kg", "text", "none")
    assert body["answers"][0]["value"] == "http://kg.example/e/Rome"
    assert body["interpretation"].startswith("SELECT ?v1 WHERE")


def test_qa_matches_combiner_bundle_exactly(client, site_data):
    question = "who participated in the web conference 2018"
    response = client.get("/qa", params={"question": question})
    expected = site_data.pipeline().answer(question, kb=("kg", "text")).to_json()
    assert response.json() == expected


def test_kb_text_restricts_branches(client, site_data):
    question = "What's the capital of Italy?"
    response = client.get("/qa", params={"question": question, "kb": "text"})
    body = response.json()
    assert body["branch"] in ("text", "none")
    expected = site_data.pipeline().answer(question, kb=("text",)).to_json()
    assert body == expected


def test_empty_question_400(client):
    assert client.get("/qa", params={"question": "  "}).status_code == 400
    assert client.get("/qa").status_code == 400


def test_unknown_kb_token_400(client):
    response = client.get("/qa", params={"question": "x", "kb": "kg,wikidata"})
    assert response.status_code == 400
    assert "wikidata" in response.json()["detail"]


def test_non_english_lang_400(client):
    assert client.get("/qa", params={"question": "x", "lang": "de"}).status_code == 400


def test_no_data_503():
    bare = TestClient(create_app(None))
    assert bare.get("/qa", params={"question": "x"}).status_code == 503


def test_post_equivalent_to_get(client):
    question = "Cinemas in London?"
    via_get = client.get("/qa", params={"question": question}).json()
    via_post = client.post("/qa", json={"question": question}).json()
    assert via_get == via_post


def test_post_validates_body(client):
    assert client.post("/qa", json=["not", "an", "object"]).status_code == 400
    assert client.post("/qa", json={"question": "x", "k": "five"}).status_code == 400


def test_k_parameter_does_not_leak_between_requests(client, site_data):
    before = site_data.config.k
    client.get("/qa", params={"question": "bridges", "k": 3})
    assert site_data.config.k == before


def test_health_endpoint(client):
    body = client.get("/health").json()
    assert body == {"status": "ok", "text": True, "kg": True}
