"""Stateless HTTP service over a loaded bank.

Three endpoints, all JSON, versioned under /api/v1:

* ``GET /sections`` — section summaries for the picker.
* ``GET /sections/{id}/questions`` — a section's questions, risk scores stripped.
* ``POST /results`` — section ids + answer ids in, category and ranked
  recommendations out.

The bank is read once at startup and never mutated; no respondent data is
stored anywhere, so identical requests produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .bank import Question, QuestionBank, Section
from .chains import Selection, Violation, check_selection
from .scoring import AssessmentResult, assemble_result


@dataclass(frozen=True)
class ServiceConfig:
    # Raw risk numbers stay server-side unless diagnostics are switched on.
    expose_risk_value: bool = False
    cors_origins: tuple[str, ...] = ()
    static_dir: str | None = None


class ResultsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    section_ids: list[str]
    answer_ids: list[str]


def section_summary_payload(section: Section) -> dict[str, Any]:
    return {
        "id": section.id,
        "name": section.name,
        "description": section.description,
        "mandatory": section.mandatory,
        "time_estimate_minutes": section.time_estimate_minutes,
    }


def question_payload(question: Question) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "id": question.id,
        "text": question.text,
        "choice_type": question.choice_type.value,
        "answers": [{"id": a.id, "text": a.text} for a in question.answers],
        "trigger_answer_ids": list(question.trigger_answer_ids),
    }
    if question.help is not None:
        payload["help"] = question.help
    return payload


def result_payload(result: AssessmentResult, expose_risk_value: bool = False) -> dict[str, Any]:
    def rec_payload(rec) -> dict[str, Any]:
        payload = {
            "id": rec.recommendation_id,
            "question_id": rec.question_id,
            "text": rec.text,
            "importance": rec.importance,
        }
        if rec.resource_link is not None:
            payload["resource_link"] = rec.resource_link
        return payload

    payload: dict[str, Any] = {
        "risk_category": result.risk_category.value,
        "category_explanation": result.category_explanation,
        "recommendation_count": len(result.recommendations_all),
        "recommendations_top": [rec_payload(r) for r in result.recommendations_top],
        "recommendations_all": [rec_payload(r) for r in result.recommendations_all],
    }
    if expose_risk_value:
        payload["diagnostics"] = {
            "risk_percent": result.risk_percent,
            "numerator": result.breakdown.numerator,
            "denominator": result.breakdown.denominator,
        }
    return payload


def violations_payload(violations: tuple[Violation, ...]) -> dict[str, Any]:
    return {
        "violations": [
            {"code": v.code, "subject_id": v.subject_id, "message": v.message}
            for v in violations
        ]
    }


def _unknown_id_violations(bank: QuestionBank, request: ResultsRequest) -> list[Violation]:
    violations = []
    for section_id in request.section_ids:
        if section_id not in bank.sections_by_id:
            violations.append(
                Violation("unknown-section", section_id, f"unknown section id: {section_id}")
            )
    for answer_id in request.answer_ids:
        if answer_id not in bank.answers_by_id:
            violations.append(
                Violation("unknown-answer", answer_id, f"unknown answer id: {answer_id}")
            )
    return violations


def create_app(bank: QuestionBank, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="quantumwatch", docs_url=None, redoc_url=None, openapi_url=None)

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    @app.get("/api/v1/sections")
    def list_sections() -> JSONResponse:
        return JSONResponse([section_summary_payload(s) for s in bank.sections])

    @app.get("/api/v1/sections/{section_id}/questions")
    def section_questions(section_id: str) -> JSONResponse:
        section = bank.sections_by_id.get(section_id)
        if section is None:
            return JSONResponse(
                status_code=404,
                content={
                    "code": "unknown-section",
                    "subject_id": section_id,
                    "message": f"unknown section id: {section_id}",
                },
            )
        return JSONResponse([question_payload(q) for q in section.questions])

    @app.post("/api/v1/results")
    def results(request: ResultsRequest) -> JSONResponse:
        unknown = _unknown_id_violations(bank, request)
        if unknown:
            return JSONResponse(status_code=422, content=violations_payload(tuple(unknown)))
        selection = Selection.of(request.section_ids, request.answer_ids)
        violations = check_selection(bank, selection)
        if violations:
            return JSONResponse(status_code=422, content=violations_payload(violations))
        result = assemble_result(bank, selection)
        return JSONResponse(result_payload(result, expose_risk_value=config.expose_risk_value))

    if config.static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="webui")

    return app
