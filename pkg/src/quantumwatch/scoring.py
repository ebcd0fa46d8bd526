"""Risk scoring, category mapping, and recommendation ranking.

The risk percentage is the sum of the selected answers' risk scores divided by
the total achievable over the questions in scope, scaled to 0-100. A question's
achievable contribution (its "cap") is the maximum answer score for
single-choice questions and the sum of answer scores for multiple-choice
questions. Scope is every question visible under the current selection across
the selected sections: hidden chained questions count on neither side, while
visible-but-unanswered questions add 0 above and their cap below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .bank import ChoiceType, Question, QuestionBank
from .chains import Selection, Violation, VisiblePlan, check_selection, visible_questions

TOP_RECOMMENDATION_LIMIT = 5


class RiskCategory(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


CATEGORY_EXPLANATIONS: dict[RiskCategory, str] = {
    RiskCategory.LOW: (
        "Most answers match current good practice. The exposure to "
        "harvest-now-decrypt-later collection looks limited; keep the flagged "
        "areas under review so the posture holds as standards evolve."
    ),
    RiskCategory.MEDIUM: (
        "Several answers point at practices that leave data open to capture "
        "today and decryption later. The posture is workable for now, but the "
        "flagged areas should be scheduled for upgrades rather than left as-is."
    ),
    RiskCategory.HIGH: (
        "The answers indicate broad exposure: traffic or stored data relies on "
        "protections that a sufficiently capable attacker can already harvest "
        "and later break. Treat the top recommendations as urgent work."
    ),
}


class InconsistentSelectionError(ValueError):
    """A selection failed the consistency check; carries the violations."""

    def __init__(self, violations: tuple[Violation, ...]):
        lines = [f"{v.code} ({v.subject_id}): {v.message}" for v in violations]
        super().__init__("inconsistent selection:\n" + "\n".join(lines))
        self.violations = violations


@dataclass(frozen=True)
class QuestionTerm:
    question_id: str
    contribution: int
    cap: int


@dataclass(frozen=True)
class ScoreBreakdown:
    numerator: int
    denominator: int
    per_question: tuple[QuestionTerm, ...]
    risk_percent: float


@dataclass(frozen=True)
class TriggeredRecommendation:
    recommendation_id: str
    question_id: str
    text: str
    importance: int
    resource_link: str | None = None


@dataclass(frozen=True)
class AssessmentResult:
    risk_percent: float
    risk_category: RiskCategory
    category_explanation: str
    recommendations_all: tuple[TriggeredRecommendation, ...]
    recommendations_top: tuple[TriggeredRecommendation, ...]
    breakdown: ScoreBreakdown


def question_cap(question: Question) -> int:
    """Largest score a question can contribute: max for single, sum for multiple."""
    scores = [a.risk_score for a in question.answers]
    if question.choice_type is ChoiceType.SINGLE:
        return max(scores, default=0)
    return sum(scores)


def _require_consistent(bank: QuestionBank, selection: Selection) -> None:
    violations = check_selection(bank, selection)
    if violations:
        raise InconsistentSelectionError(violations)


def _breakdown(bank: QuestionBank, selection: Selection, plan: VisiblePlan) -> ScoreBreakdown:
    chosen = selection.answer_set
    terms = []
    numerator = 0
    denominator = 0
    for section_plan in plan.sections:
        for question_id in section_plan.question_ids:
            question = bank.questions_by_id[question_id]
            contribution = sum(a.risk_score for a in question.answers if a.id in chosen)
            cap = question_cap(question)
            terms.append(QuestionTerm(question_id=question_id, contribution=contribution, cap=cap))
            numerator += contribution
            denominator += cap
    risk_percent = 0.0 if denominator == 0 else 100.0 * numerator / denominator
    return ScoreBreakdown(
        numerator=numerator,
        denominator=denominator,
        per_question=tuple(terms),
        risk_percent=risk_percent,
    )


def compute_breakdown(bank: QuestionBank, selection: Selection) -> ScoreBreakdown:
    """Numerator, denominator, and per-question terms for a consistent selection."""
    _require_consistent(bank, selection)
    return _breakdown(bank, selection, visible_questions(bank, selection))


def categorize(risk_percent: float) -> RiskCategory:
    """Band a 0-100 risk value: <=33 low, 34-59 medium, >=60 high.

    The bands are defined on integers, so real values are rounded half away
    from zero before comparison (33.4 stays low, 33.5 becomes medium).
    """
    if not 0.0 <= risk_percent <= 100.0:
        raise ValueError(f"risk percentage must be within [0, 100], got {risk_percent}")
    rounded = math.floor(risk_percent + 0.5)
    if rounded <= 33:
        return RiskCategory.LOW
    if rounded <= 59:
        return RiskCategory.MEDIUM
    return RiskCategory.HIGH


def _triggered(
    bank: QuestionBank, selection: Selection, plan: VisiblePlan
) -> tuple[TriggeredRecommendation, ...]:
    chosen = selection.answer_set
    fired = [
        TriggeredRecommendation(
            recommendation_id=rec.id,
            question_id=rec.question_id,
            text=rec.text,
            importance=rec.importance,
            resource_link=rec.resource_link,
        )
        for rec in bank.recommendations
        if rec.question_id in plan.visible_set
        and any(trigger in chosen for trigger in rec.trigger_answer_ids)
    ]
    # Stable sort keeps bank declaration order within equal importance.
    fired.sort(key=lambda rec: -rec.importance)
    return tuple(fired)


def triggered_recommendations(
    bank: QuestionBank, selection: Selection
) -> tuple[TriggeredRecommendation, ...]:
    """Recommendations fired by the selection, highest importance first."""
    _require_consistent(bank, selection)
    return _triggered(bank, selection, visible_questions(bank, selection))


def assemble_result(bank: QuestionBank, selection: Selection) -> AssessmentResult:
    """Full assessment: score, category with explanation, ranked recommendations."""
    _require_consistent(bank, selection)
    plan = visible_questions(bank, selection)
    breakdown = _breakdown(bank, selection, plan)
    category = categorize(breakdown.risk_percent)
    recommendations = _triggered(bank, selection, plan)
    return AssessmentResult(
        risk_percent=breakdown.risk_percent,
        risk_category=category,
        category_explanation=CATEGORY_EXPLANATIONS[category],
        recommendations_all=recommendations,
        recommendations_top=recommendations[:TOP_RECOMMENDATION_LIMIT],
        breakdown=breakdown,
    )
