"""Brute-force answer-space exploration, kept independent of the scoring path.

Everything here recomputes visibility, consistency, and risk by literal
iteration over the bank, deliberately sharing no logic with ``chains`` or
``scoring`` so it can serve as a second opinion in tests and in the CLI's
``explore`` command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .bank import ChoiceType, QuestionBank, Section, UnknownIdError
from .chains import Selection

DEFAULT_ENUMERATION_LIMIT = 1_000_000


@dataclass(frozen=True)
class AnswerSpaceReport:
    assignments_enumerated: int
    truncated: bool
    min_risk: float
    max_risk: float
    category_counts: dict[str, int]
    per_recommendation_trigger_counts: dict[str, int]


def _resolve_sections(bank: QuestionBank, section_ids: Iterable[str]) -> tuple[Section, ...]:
    requested = tuple(dict.fromkeys(section_ids))
    unknown = [sid for sid in requested if sid not in bank.sections_by_id]
    if unknown:
        raise UnknownIdError(section_ids=unknown)
    chosen = set(requested)
    mandatory = bank.mandatory_section
    if mandatory is not None:
        chosen.add(mandatory.id)
    optional = {s.id for s in bank.sections if not s.mandatory}
    if optional and not (chosen & optional):
        raise ValueError(
            "at least one non-mandatory section is required to form consistent selections"
        )
    return tuple(section for section in bank.sections if section.id in chosen)


def _assignments(sections: tuple[Section, ...]) -> Iterator[tuple[str, ...]]:
    """Depth-first walk over every legal answer combination, document order.

    A question is expanded only while visible under the answers chosen so far;
    triggers point strictly backwards so one forward pass settles visibility.
    Single-choice questions contribute "no answer" first, then each answer in
    bank order; multiple-choice questions contribute subsets in binary counting
    order over bank-ordered answers.
    """
    flat = [question for section in sections for question in section.questions]

    def options(index: int, chosen_set: set[str]) -> Iterator[tuple[str, ...]]:
        question = flat[index]
        if question.trigger_answer_ids and not any(
            trigger in chosen_set for trigger in question.trigger_answer_ids
        ):
            yield ()
            return
        if question.choice_type is ChoiceType.SINGLE:
            yield ()
            for answer in question.answers:
                yield (answer.id,)
        else:
            ids = [answer.id for answer in question.answers]
            for mask in range(2 ** len(ids)):
                yield tuple(ids[k] for k in range(len(ids)) if mask >> k & 1)

    def walk(index: int, chosen: list[str], chosen_set: set[str]) -> Iterator[tuple[str, ...]]:
        if index == len(flat):
            yield tuple(chosen)
            return
        for picked in options(index, chosen_set):
            chosen.extend(picked)
            chosen_set.update(picked)
            yield from walk(index + 1, chosen, chosen_set)
            for answer_id in picked:
                chosen_set.discard(answer_id)
            del chosen[len(chosen) - len(picked):len(chosen)]

    yield from walk(0, [], set())


def enumerate_assignments(
    bank: QuestionBank,
    section_ids: Iterable[str],
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> Iterator[Selection]:
    """Yield every consistent selection over the given sections, up to ``limit``.

    The mandatory section is always part of the scope. Order is deterministic,
    so a truncated run is a stable prefix of the full enumeration.
    """
    if limit <= 0:
        raise ValueError(f"limit must be positive, got {limit}")
    sections = _resolve_sections(bank, section_ids)
    ids = tuple(section.id for section in sections)
    for count, answers in enumerate(_assignments(sections)):
        if count == limit:
            return
        yield Selection(section_ids=ids, answer_ids=answers)


def oracle_score(bank: QuestionBank, selection: Selection) -> float:
    """Risk percentage by naive summation; raises ValueError when inconsistent."""
    unknown_sections = [s for s in selection.section_ids if s not in bank.sections_by_id]
    if unknown_sections:
        raise UnknownIdError(section_ids=unknown_sections)
    chosen = set(selection.answer_ids)
    section_set = set(selection.section_ids)

    mandatory = [s for s in bank.sections if s.mandatory]
    if mandatory and mandatory[0].id not in section_set:
        raise ValueError("inconsistent selection: mandatory section missing")
    optional = {s.id for s in bank.sections if not s.mandatory}
    if optional and not (section_set & optional):
        raise ValueError("inconsistent selection: no non-mandatory section selected")

    numerator = 0
    denominator = 0
    seen_answers: set[str] = set()
    for section in bank.sections:
        in_scope = section.id in section_set
        for question in section.questions:
            visible = in_scope and (
                not question.trigger_answer_ids
                or any(trigger in chosen for trigger in question.trigger_answer_ids)
            )
            picked_here = [answer for answer in question.answers if answer.id in chosen]
            seen_answers.update(answer.id for answer in picked_here)
            if not visible:
                if picked_here:
                    raise ValueError(
                        f"inconsistent selection: answers of hidden or out-of-scope "
                        f"question '{question.id}' are selected"
                    )
                continue
            if question.choice_type is ChoiceType.SINGLE:
                if len(picked_here) > 1:
                    raise ValueError(
                        f"inconsistent selection: single-choice question "
                        f"'{question.id}' has {len(picked_here)} answers"
                    )
                denominator += max((answer.risk_score for answer in question.answers), default=0)
            else:
                denominator += sum(answer.risk_score for answer in question.answers)
            numerator += sum(answer.risk_score for answer in picked_here)

    stray = chosen - seen_answers
    if stray:
        raise UnknownIdError(answer_ids=sorted(stray))
    if denominator == 0:
        return 0.0
    return 100.0 * numerator / denominator


def _band(risk_percent: float) -> str:
    rounded = math.floor(risk_percent + 0.5)
    if rounded <= 33:
        return "low"
    if rounded <= 59:
        return "medium"
    return "high"


def report(
    bank: QuestionBank,
    section_ids: Iterable[str],
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> AnswerSpaceReport:
    """Aggregate risk extremes, category reachability, and trigger counts.

    Extremes are exact when the space fit under ``limit``; otherwise they
    describe the enumerated prefix and ``truncated`` is set.
    """
    if limit <= 0:
        raise ValueError(f"limit must be positive, got {limit}")
    sections = _resolve_sections(bank, section_ids)
    ids = tuple(section.id for section in sections)

    count = 0
    truncated = False
    min_risk = math.inf
    max_risk = -math.inf
    category_counts = {"low": 0, "medium": 0, "high": 0}
    trigger_counts = {rec.id: 0 for rec in bank.recommendations}

    for answers in _assignments(sections):
        if count == limit:
            truncated = True
            break
        count += 1
        selection = Selection(section_ids=ids, answer_ids=answers)
        risk = oracle_score(bank, selection)
        min_risk = min(min_risk, risk)
        max_risk = max(max_risk, risk)
        category_counts[_band(risk)] += 1
        chosen = set(answers)
        for rec in bank.recommendations:
            if any(trigger in chosen for trigger in rec.trigger_answer_ids):
                trigger_counts[rec.id] += 1

    return AnswerSpaceReport(
        assignments_enumerated=count,
        truncated=truncated,
        min_risk=min_risk,
        max_risk=max_risk,
        category_counts=category_counts,
        per_recommendation_trigger_counts=trigger_counts,
    )
