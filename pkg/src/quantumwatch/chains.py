"""Question visibility, selection consistency, and directional navigation.

A chained question is shown only while at least one of its trigger answers is
selected. Because triggers always point at strictly earlier questions in the
same section, visibility of an entire bank can be read off the selection in a
single pass, and chains of chained questions collapse transitively: if a
trigger's own question is hidden, its answers cannot legally be selected, so
the dependent question stays hidden too.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable

from .bank import ChoiceType, Question, QuestionBank, UnknownIdError

SINGLE_CHOICE_ARITY = "single-choice-arity"
HIDDEN_QUESTION_ANSWER = "hidden-question-answer"
SECTION_NOT_SELECTED = "section-not-selected"
MANDATORY_MISSING = "mandatory-missing"
NO_OPTIONAL_SECTION = "no-optional-section"


@dataclass(frozen=True)
class Selection:
    """The respondent's chosen section ids and answer ids (both ordered, deduped)."""

    section_ids: tuple[str, ...]
    answer_ids: tuple[str, ...]

    @classmethod
    def of(cls, section_ids: Iterable[str], answer_ids: Iterable[str]) -> "Selection":
        return cls(_ordered_dedupe(section_ids), _ordered_dedupe(answer_ids))

    @cached_property
    def section_set(self) -> frozenset[str]:
        return frozenset(self.section_ids)

    @cached_property
    def answer_set(self) -> frozenset[str]:
        return frozenset(self.answer_ids)

    @classmethod
    def from_payload(cls, payload: Any) -> "Selection":
        """Build from the wire shape {"section_ids": [...], "answer_ids": [...]}."""
        if not isinstance(payload, dict):
            raise ValueError("selection document must be a JSON object")
        extra = sorted(set(payload) - {"section_ids", "answer_ids"})
        if extra:
            raise ValueError(f"selection document has unknown field '{extra[0]}'")
        out = {}
        for key in ("section_ids", "answer_ids"):
            value = payload.get(key)
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ValueError(f"selection field '{key}' must be an array of strings")
            out[key] = value
        return cls.of(out["section_ids"], out["answer_ids"])

    def to_payload(self) -> dict[str, list[str]]:
        return {"section_ids": list(self.section_ids), "answer_ids": list(self.answer_ids)}


def _ordered_dedupe(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True)
class SectionPlan:
    section_id: str
    question_ids: tuple[str, ...]


@dataclass(frozen=True)
class VisiblePlan:
    """Per selected section, in bank order, the question ids currently shown."""

    sections: tuple[SectionPlan, ...]

    @cached_property
    def visible_set(self) -> frozenset[str]:
        return frozenset(qid for plan in self.sections for qid in plan.question_ids)

    def question_ids(self) -> tuple[str, ...]:
        return tuple(qid for plan in self.sections for qid in plan.question_ids)

    def for_section(self, section_id: str) -> tuple[str, ...]:
        for plan in self.sections:
            if plan.section_id == section_id:
                return plan.question_ids
        raise UnknownIdError(section_ids=[section_id])


@dataclass(frozen=True)
class Violation:
    code: str
    subject_id: str
    message: str


def _question_visible(question: Question, chosen: frozenset[str]) -> bool:
    if not question.is_chained:
        return True
    return any(trigger in chosen for trigger in question.trigger_answer_ids)


def _require_known_ids(bank: QuestionBank, selection: Selection) -> None:
    unknown_sections = [s for s in selection.section_ids if s not in bank.sections_by_id]
    unknown_answers = [a for a in selection.answer_ids if a not in bank.answers_by_id]
    if unknown_sections or unknown_answers:
        raise UnknownIdError(section_ids=unknown_sections, answer_ids=unknown_answers)


def visible_questions(bank: QuestionBank, selection: Selection) -> VisiblePlan:
    """The questions shown for this selection, section by section in bank order."""
    _require_known_ids(bank, selection)
    chosen = selection.answer_set
    plans = []
    for section in bank.sections:
        if section.id not in selection.section_set:
            continue
        visible = tuple(q.id for q in section.questions if _question_visible(q, chosen))
        plans.append(SectionPlan(section_id=section.id, question_ids=visible))
    return VisiblePlan(sections=tuple(plans))


def check_selection(bank: QuestionBank, selection: Selection) -> tuple[Violation, ...]:
    """All consistency violations; an empty result means scoring may proceed.

    Checks, in order: the mandatory section is selected; at least one
    non-mandatory section is selected when the bank has any; every selected
    answer lives in a selected section and in a currently visible question;
    single-choice questions carry at most one selected answer. Visible but
    unanswered questions are legal and not flagged.
    """
    _require_known_ids(bank, selection)
    violations: list[Violation] = []

    mandatory = bank.mandatory_section
    if mandatory is not None and mandatory.id not in selection.section_set:
        violations.append(
            Violation(
                MANDATORY_MISSING,
                mandatory.id,
                f"mandatory section '{mandatory.id}' is not selected",
            )
        )
    if bank.non_mandatory_section_ids and not (
        selection.section_set & bank.non_mandatory_section_ids
    ):
        violations.append(
            Violation(
                NO_OPTIONAL_SECTION,
                "selection",
                "at least one non-mandatory section must be selected",
            )
        )

    plan = visible_questions(bank, selection)
    for answer_id in selection.answer_ids:
        question = bank.question_of_answer[answer_id]
        section = bank.section_of_question[question.id]
        if section.id not in selection.section_set:
            violations.append(
                Violation(
                    SECTION_NOT_SELECTED,
                    question.id,
                    f"answer '{answer_id}' belongs to question '{question.id}' in "
                    f"unselected section '{section.id}'",
                )
            )
        elif question.id not in plan.visible_set:
            violations.append(
                Violation(
                    HIDDEN_QUESTION_ANSWER,
                    question.id,
                    f"answer '{answer_id}' belongs to question '{question.id}', "
                    "which is hidden under the current selection",
                )
            )

    per_question: dict[str, list[str]] = {}
    for answer_id in selection.answer_ids:
        per_question.setdefault(bank.question_of_answer[answer_id].id, []).append(answer_id)
    for section in bank.sections:
        for question in section.questions:
            chosen_here = per_question.get(question.id, ())
            if question.choice_type is ChoiceType.SINGLE and len(chosen_here) > 1:
                violations.append(
                    Violation(
                        SINGLE_CHOICE_ARITY,
                        question.id,
                        f"single-choice question '{question.id}' has "
                        f"{len(chosen_here)} selected answers: {', '.join(chosen_here)}",
                    )
                )

    return tuple(violations)


def _section_visibility(bank: QuestionBank, section_id: str, selection: Selection) -> list[bool]:
    section = bank.sections_by_id.get(section_id)
    if section is None:
        raise UnknownIdError(section_ids=[section_id])
    chosen = selection.answer_set
    return [_question_visible(q, chosen) for q in section.questions]


def next_question(
    bank: QuestionBank, section_id: str, current_index: int, selection: Selection
) -> int | None:
    """Index of the nearest visible question after ``current_index``, or None.

    ``current_index`` may be -1, the virtual start-of-section sentinel. Runs of
    consecutive hidden chained questions are skipped in one step.
    """
    visible = _section_visibility(bank, section_id, selection)
    if not -1 <= current_index <= len(visible):
        raise IndexError(f"index {current_index} out of range for section '{section_id}'")
    for index in range(current_index + 1, len(visible)):
        if visible[index]:
            return index
    return None


def prev_question(
    bank: QuestionBank, section_id: str, current_index: int, selection: Selection
) -> int | None:
    """Index of the nearest visible question before ``current_index``, or None.

    ``current_index`` may equal the section length, the virtual end-of-section
    sentinel. Mirror image of :func:`next_question`.
    """
    visible = _section_visibility(bank, section_id, selection)
    if not -1 <= current_index <= len(visible):
        raise IndexError(f"index {current_index} out of range for section '{section_id}'")
    for index in range(current_index - 1, -1, -1):
        if visible[index]:
            return index
    return None


def prune_hidden_answers(bank: QuestionBank, selection: Selection) -> Selection:
    """Drop answers whose questions are hidden or out of scope, to a fixpoint.

    Clients keep earlier answers around while the respondent edits; once an
    edit hides a chained question, its stored answers (and anything chained on
    them) must go before submission.
    """
    _require_known_ids(bank, selection)
    current = selection
    while True:
        plan = visible_questions(bank, current)
        kept = tuple(
            answer_id
            for answer_id in current.answer_ids
            if bank.question_of_answer[answer_id].id in plan.visible_set
        )
        if kept == current.answer_ids:
            return current
        current = Selection(section_ids=current.section_ids, answer_ids=kept)
