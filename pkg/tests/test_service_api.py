from __future__ import annotations

import hashlib
import json
import shutil
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from quantumwatch import ServiceConfig, create_app, load_bank

GOLDEN_DIR = Path(__file__).parent / "golden"
SCHEMA_DIR = Path(__file__).parent.parent / "schemas"


def _schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text())


@pytest.fixture(scope="module")
def client(minibank) -> TestClient:
    return TestClient(create_app(minibank))


@pytest.fixture(scope="module")
def diagnostics_client(minibank) -> TestClient:
    return TestClient(create_app(minibank, ServiceConfig(expose_risk_value=True)))


RESULTS_BODY = {"section_ids": ["s1"], "answer_ids": ["a3", "b3", "c2"]}


# --------------------------------------------------------------------------
# GET /api/v1/sections


def test_sections_lists_all_with_mandatory_flag(client):
    response = client.get("/api/v1/sections")
    assert response.status_code == 200
    payload = response.json()
    assert len(payload) == 1
    assert payload[0]["mandatory"] is True
    assert payload[0]["time_estimate_minutes"] == 5


def test_sections_response_is_byte_identical(client):
    first = client.get("/api/v1/sections")
    second = client.get("/api/v1/sections")
    assert first.content == second.content


def test_shipped_bank_sections(shipped_bank):
    with TestClient(create_app(shipped_bank)) as shipped_client:
        payload = shipped_client.get("/api/v1/sections").json()
    assert len(payload) == 5
    assert sum(1 for s in payload if s["mandatory"]) == 1


# --------------------------------------------------------------------------
# GET /api/v1/sections/{id}/questions


def test_questions_payload_shape(client):
    payload = client.get("/api/v1/sections/s1/questions").json()
    assert [q["id"] for q in payload] == ["q1", "q2", "q3"]
    assert payload[2]["trigger_answer_ids"] == ["a3"]
    assert payload[0]["help"].startswith("Check the tunnel")
    assert "help" not in payload[1]


def test_questions_never_expose_risk_scores(client):
    response = client.get("/api/v1/sections/s1/questions")
    assert b"risk_score" not in response.content
    for question in response.json():
        for answer in question["answers"]:
            assert set(answer) == {"id", "text"}


def test_unknown_section_is_named_in_404(client):
    response = client.get("/api/v1/sections/zz/questions")
    assert response.status_code == 404
    payload = response.json()
    assert payload["code"] == "unknown-section"
    assert payload["subject_id"] == "zz"


# --------------------------------------------------------------------------
# POST /api/v1/results


def test_results_happy_path(client):
    response = client.post("/api/v1/results", json=RESULTS_BODY)
    assert response.status_code == 200
    payload = response.json()
    assert payload["risk_category"] == "high"
    assert payload["recommendation_count"] == 3
    assert [r["id"] for r in payload["recommendations_top"]] == ["r1", "r3", "r2"]
    assert payload["recommendations_all"] == payload["recommendations_top"]
    assert "diagnostics" not in payload
    assert b"risk_percent" not in response.content


def test_results_hidden_question_answer_rejected(client):
    response = client.post(
        "/api/v1/results", json={"section_ids": ["s1"], "answer_ids": ["a1", "c2"]}
    )
    assert response.status_code == 422
    violations = response.json()["violations"]
    assert violations[0]["code"] == "hidden-question-answer"
    assert "c2" in violations[0]["message"]


def test_results_missing_mandatory_section(client):
    response = client.post("/api/v1/results", json={"section_ids": [], "answer_ids": []})
    assert response.status_code == 422
    assert [v["code"] for v in response.json()["violations"]] == ["mandatory-missing"]


def test_results_unknown_ids_are_listed(client):
    response = client.post(
        "/api/v1/results", json={"section_ids": ["s1", "zz"], "answer_ids": ["a1", "yy"]}
    )
    assert response.status_code == 422
    violations = response.json()["violations"]
    assert [(v["code"], v["subject_id"]) for v in violations] == [
        ("unknown-section", "zz"),
        ("unknown-answer", "yy"),
    ]


def test_cors_allow_list(minibank):
    config = ServiceConfig(cors_origins=("http://localhost:5173",))
    with TestClient(create_app(minibank, config)) as cors_client:
        allowed = cors_client.get(
            "/api/v1/sections", headers={"Origin": "http://localhost:5173"}
        )
        assert allowed.headers["access-control-allow-origin"] == "http://localhost:5173"
        denied = cors_client.get(
            "/api/v1/sections", headers={"Origin": "http://evil.example"}
        )
        assert "access-control-allow-origin" not in denied.headers
    # Without a configured allow-list no CORS headers appear at all.
    with TestClient(create_app(minibank)) as plain_client:
        plain = plain_client.get(
            "/api/v1/sections", headers={"Origin": "http://localhost:5173"}
        )
        assert "access-control-allow-origin" not in plain.headers


def test_results_diagnostics_flag_exposes_risk(diagnostics_client):
    payload = diagnostics_client.post("/api/v1/results", json=RESULTS_BODY).json()
    assert payload["diagnostics"] == {
        "risk_percent": 80.0,
        "numerator": 8,
        "denominator": 10,
    }


def test_top_five_split_in_payload():
    from test_scoring_engine import seven_recommendation_bank

    bank = seven_recommendation_bank()
    with TestClient(create_app(bank)) as seven_client:
        payload = seven_client.post(
            "/api/v1/results",
            json={"section_ids": ["s1"], "answer_ids": [f"n{i}" for i in range(1, 8)]},
        ).json()
    assert payload["recommendation_count"] == 7
    assert len(payload["recommendations_top"]) == 5
    assert len(payload["recommendations_all"]) == 7
    assert [r["importance"] for r in payload["recommendations_all"]] == [3, 3, 2, 2, 1, 1, 0]


# --------------------------------------------------------------------------
# golden bytes


def test_sections_golden_bytes(client):
    assert client.get("/api/v1/sections").content == (
        GOLDEN_DIR / "minibank_sections.json"
    ).read_bytes()


def test_questions_golden_bytes(client):
    assert client.get("/api/v1/sections/s1/questions").content == (
        GOLDEN_DIR / "minibank_questions_s1.json"
    ).read_bytes()


def test_results_golden_bytes(client):
    response = client.post("/api/v1/results", json=RESULTS_BODY)
    assert response.content == (GOLDEN_DIR / "minibank_results.json").read_bytes()


# --------------------------------------------------------------------------
# shipped response schemas


def test_fixture_responses_validate_against_shipped_schemas(client, diagnostics_client):
    jsonschema.validate(client.get("/api/v1/sections").json(), _schema("sections.schema.json"))
    jsonschema.validate(
        client.get("/api/v1/sections/s1/questions").json(), _schema("questions.schema.json")
    )
    results_schema = _schema("results.schema.json")
    jsonschema.validate(client.post("/api/v1/results", json=RESULTS_BODY).json(), results_schema)
    jsonschema.validate(
        diagnostics_client.post("/api/v1/results", json=RESULTS_BODY).json(), results_schema
    )
    violation_response = client.post(
        "/api/v1/results", json={"section_ids": [], "answer_ids": []}
    )
    jsonschema.validate(violation_response.json(), _schema("violations.schema.json"))


def test_shipped_bank_responses_validate_against_shipped_schemas(shipped_bank):
    sections_schema = _schema("sections.schema.json")
    questions_schema = _schema("questions.schema.json")
    with TestClient(create_app(shipped_bank)) as shipped_client:
        sections = shipped_client.get("/api/v1/sections").json()
        jsonschema.validate(sections, sections_schema)
        for section in sections:
            payload = shipped_client.get(f"/api/v1/sections/{section['id']}/questions").json()
            jsonschema.validate(payload, questions_schema)
        results = shipped_client.post(
            "/api/v1/results",
            json={"section_ids": ["general", "software"], "answer_ids": ["q4-1-a2"]},
        ).json()
        jsonschema.validate(results, _schema("results.schema.json"))


# --------------------------------------------------------------------------
# statelessness


def _tree_digest(root: Path) -> dict[str, str]:
    digest = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest[str(path.relative_to(root))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return digest


def test_hundred_identical_posts_and_no_data_mutation(minibank_path, tmp_path):
    """Same request, same bytes, and the data directory stays untouched."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    bank_file = data_dir / "bank.json"
    shutil.copy(minibank_path, bank_file)
    bank = load_bank(bank_file.read_bytes())
    data_dir.chmod(0o555)
    try:
        before = _tree_digest(data_dir)
        with TestClient(create_app(bank)) as fresh_client:
            bodies = {
                fresh_client.post("/api/v1/results", json=RESULTS_BODY).content
                for _ in range(100)
            }
        assert len(bodies) == 1
        assert _tree_digest(data_dir) == before
    finally:
        data_dir.chmod(0o755)
