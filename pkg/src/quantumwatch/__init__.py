"""Questionnaire-driven security readiness assessment engine.

The library is layered: ``bank`` owns the validated question-bank model,
``chains`` computes visibility and navigation over it, ``scoring`` turns a
consistent selection into a risk category plus ranked recommendations,
``oracle`` re-derives everything by brute force for verification, and
``service``/``cli`` expose the whole thing over HTTP and the terminal.
"""

from .bank import (
    Answer,
    BankDiagnostics,
    BankParseError,
    BankValidationError,
    ChoiceType,
    Finding,
    Question,
    QuestionBank,
    Recommendation,
    Section,
    UnknownIdError,
    load_bank,
    load_bank_file,
    parse_bank,
    serialize_bank,
    validate_bank,
)
from .chains import (
    Selection,
    Violation,
    VisiblePlan,
    check_selection,
    next_question,
    prev_question,
    prune_hidden_answers,
    visible_questions,
)
from .oracle import AnswerSpaceReport, enumerate_assignments, oracle_score, report
from .scoring import (
    AssessmentResult,
    InconsistentSelectionError,
    RiskCategory,
    ScoreBreakdown,
    TriggeredRecommendation,
    assemble_result,
    categorize,
    compute_breakdown,
    question_cap,
    triggered_recommendations,
)
from .service import ServiceConfig, create_app

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AnswerSpaceReport",
    "AssessmentResult",
    "BankDiagnostics",
    "BankParseError",
    "BankValidationError",
    "ChoiceType",
    "Finding",
    "InconsistentSelectionError",
    "Question",
    "QuestionBank",
    "Recommendation",
    "RiskCategory",
    "ScoreBreakdown",
    "Section",
    "Selection",
    "ServiceConfig",
    "TriggeredRecommendation",
    "UnknownIdError",
    "Violation",
    "VisiblePlan",
    "assemble_result",
    "categorize",
    "check_selection",
    "compute_breakdown",
    "create_app",
    "enumerate_assignments",
    "load_bank",
    "load_bank_file",
    "next_question",
    "oracle_score",
    "parse_bank",
    "prev_question",
    "prune_hidden_answers",
    "question_cap",
    "report",
    "serialize_bank",
    "triggered_recommendations",
    "validate_bank",
    "visible_questions",
]
