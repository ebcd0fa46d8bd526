"""Question-bank model: strict JSON parsing, structural validation, serialization.

A bank document is UTF-8 JSON with the top-level shape::

    {"format_version": "1", "comment": "...", "sections": [...], "recommendations": [...]}

``comment`` is optional free text (used to flag editorial content such as
hand-assigned risk scores); every other unknown key is rejected. Parsing only
guarantees the document is structurally well formed; cross-reference and range
rules are the job of :func:`validate_bank`, and :func:`load_bank` is the gate
that refuses any bank with error-level findings.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Iterator

MAX_TEXT_LENGTH = 1000
SUPPORTED_FORMAT_VERSIONS = ("1",)

ERROR = "error"
WARNING = "warning"


class ChoiceType(str, Enum):
    SINGLE = "single"
    MULTIPLE = "multiple"


class BankParseError(ValueError):
    """A bank document could not be turned into a model.

    ``location`` is a JSONPath-style pointer into the offending document.
    """

    def __init__(self, reason: str, location: str = "$"):
        super().__init__(f"{location}: {reason}")
        self.reason = reason
        self.location = location


class BankValidationError(ValueError):
    """Raised by the loading gate when a parsed bank has error findings."""

    def __init__(self, diagnostics: "BankDiagnostics"):
        lines = [f"{f.code} ({f.subject_id}): {f.message}" for f in diagnostics.errors]
        super().__init__("bank failed validation:\n" + "\n".join(lines))
        self.diagnostics = diagnostics


class UnknownIdError(KeyError):
    """One or more identifiers do not resolve against the bank."""

    def __init__(self, section_ids: Iterable[str] = (), answer_ids: Iterable[str] = ()):
        self.section_ids = tuple(section_ids)
        self.answer_ids = tuple(answer_ids)
        parts = []
        if self.section_ids:
            parts.append("unknown section ids: " + ", ".join(self.section_ids))
        if self.answer_ids:
            parts.append("unknown answer ids: " + ", ".join(self.answer_ids))
        super().__init__("; ".join(parts) or "unknown id")


@dataclass(frozen=True)
class Answer:
    id: str
    text: str
    risk_score: int


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    choice_type: ChoiceType
    answers: tuple[Answer, ...]
    help: str | None = None
    trigger_answer_ids: tuple[str, ...] = ()

    @property
    def is_chained(self) -> bool:
        return bool(self.trigger_answer_ids)


@dataclass(frozen=True)
class Section:
    id: str
    name: str
    description: str
    mandatory: bool
    time_estimate_minutes: int
    questions: tuple[Question, ...]


@dataclass(frozen=True)
class Recommendation:
    id: str
    question_id: str
    text: str
    importance: int
    trigger_answer_ids: tuple[str, ...]
    resource_link: str | None = None


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    message: str
    subject_id: str


@dataclass(frozen=True)
class BankDiagnostics:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class QuestionBank:
    format_version: str
    sections: tuple[Section, ...]
    recommendations: tuple[Recommendation, ...]
    comment: str | None = None

    # Lookup tables are derived lazily; a validated bank is immutable so they
    # can be shared freely across threads and requests.

    @cached_property
    def sections_by_id(self) -> dict[str, Section]:
        return {s.id: s for s in self.sections}

    @cached_property
    def questions_by_id(self) -> dict[str, Question]:
        return {q.id: q for s in self.sections for q in s.questions}

    @cached_property
    def answers_by_id(self) -> dict[str, Answer]:
        return {a.id: a for q in self.questions_by_id.values() for a in q.answers}

    @cached_property
    def question_of_answer(self) -> dict[str, Question]:
        return {a.id: q for s in self.sections for q in s.questions for a in q.answers}

    @cached_property
    def section_of_question(self) -> dict[str, Section]:
        return {q.id: s for s in self.sections for q in s.questions}

    @cached_property
    def question_index_in_section(self) -> dict[str, int]:
        return {q.id: i for s in self.sections for i, q in enumerate(s.questions)}

    @cached_property
    def recommendations_by_id(self) -> dict[str, Recommendation]:
        return {r.id: r for r in self.recommendations}

    @cached_property
    def mandatory_section(self) -> Section | None:
        for s in self.sections:
            if s.mandatory:
                return s
        return None

    @cached_property
    def non_mandatory_section_ids(self) -> frozenset[str]:
        return frozenset(s.id for s in self.sections if not s.mandatory)

    @property
    def question_count(self) -> int:
        return sum(len(s.questions) for s in self.sections)

    def iter_questions(self) -> Iterator[tuple[Section, Question]]:
        for s in self.sections:
            for q in s.questions:
                yield s, q


# --------------------------------------------------------------------------
# Parsing


class _Obj:
    """Cursor over one JSON object; tracks location and consumed keys."""

    def __init__(self, raw: Any, location: str, label: str | None = None):
        if not isinstance(raw, dict):
            raise BankParseError(f"expected an object, got {_type_name(raw)}", location)
        self.raw = raw
        self.location = location
        self.label = label
        self._seen: set[str] = set()

    def _describe(self, key: str) -> str:
        if self.label:
            return f"field '{key}' on {self.label}"
        return f"field '{key}'"

    def _get(self, key: str, required: bool) -> Any:
        self._seen.add(key)
        if key not in self.raw:
            if required:
                raise BankParseError(f"missing required {self._describe(key)}", f"{self.location}.{key}")
            return None
        return self.raw[key]

    def str_(self, key: str, required: bool = True) -> str | None:
        value = self._get(key, required)
        if value is None:
            return None
        if not isinstance(value, str):
            raise BankParseError(
                f"{self._describe(key)} must be a string, got {_type_name(value)}",
                f"{self.location}.{key}",
            )
        return value

    def int_(self, key: str) -> int:
        value = self._get(key, required=True)
        if isinstance(value, bool) or not isinstance(value, int):
            raise BankParseError(
                f"{self._describe(key)} must be an integer, got {_type_name(value)}",
                f"{self.location}.{key}",
            )
        return value

    def bool_(self, key: str) -> bool:
        value = self._get(key, required=True)
        if not isinstance(value, bool):
            raise BankParseError(
                f"{self._describe(key)} must be a boolean, got {_type_name(value)}",
                f"{self.location}.{key}",
            )
        return value

    def list_(self, key: str, required: bool = True) -> list[tuple[Any, str]]:
        value = self._get(key, required)
        if value is None:
            return []
        if not isinstance(value, list):
            raise BankParseError(
                f"{self._describe(key)} must be an array, got {_type_name(value)}",
                f"{self.location}.{key}",
            )
        return [(item, f"{self.location}.{key}[{i}]") for i, item in enumerate(value)]

    def str_list(self, key: str, required: bool = True) -> tuple[str, ...]:
        out = []
        for item, loc in self.list_(key, required):
            if not isinstance(item, str):
                raise BankParseError(f"expected a string, got {_type_name(item)}", loc)
            out.append(item)
        return tuple(out)

    def finish(self) -> None:
        unknown = sorted(set(self.raw) - self._seen)
        if unknown:
            raise BankParseError(
                f"unknown {self._describe(unknown[0])}", f"{self.location}.{unknown[0]}"
            )


def _type_name(value: Any) -> str:
    if value is None:
        return "null"
    return {dict: "object", list: "array", str: "string", bool: "boolean",
            int: "integer", float: "number"}.get(type(value), type(value).__name__)


def _parse_answer(raw: Any, location: str) -> Answer:
    obj = _Obj(raw, location)
    answer_id = obj.str_("id")
    obj.label = f"answer '{answer_id}'"
    answer = Answer(id=answer_id, text=obj.str_("text"), risk_score=obj.int_("risk_score"))
    obj.finish()
    return answer


def _parse_question(raw: Any, location: str) -> Question:
    obj = _Obj(raw, location)
    question_id = obj.str_("id")
    obj.label = f"question '{question_id}'"
    text = obj.str_("text")
    choice_raw = obj.str_("choice_type")
    try:
        choice_type = ChoiceType(choice_raw)
    except ValueError:
        raise BankParseError(
            f"choice_type on question '{question_id}' must be 'single' or 'multiple', got {choice_raw!r}",
            f"{location}.choice_type",
        ) from None
    answers = tuple(_parse_answer(item, loc) for item, loc in obj.list_("answers"))
    question = Question(
        id=question_id,
        text=text,
        choice_type=choice_type,
        answers=answers,
        help=obj.str_("help", required=False),
        trigger_answer_ids=obj.str_list("trigger_answer_ids", required=False),
    )
    obj.finish()
    return question


def _parse_section(raw: Any, location: str) -> Section:
    obj = _Obj(raw, location)
    section_id = obj.str_("id")
    obj.label = f"section '{section_id}'"
    section = Section(
        id=section_id,
        name=obj.str_("name"),
        description=obj.str_("description"),
        mandatory=obj.bool_("mandatory"),
        time_estimate_minutes=obj.int_("time_estimate_minutes"),
        questions=tuple(_parse_question(item, loc) for item, loc in obj.list_("questions")),
    )
    obj.finish()
    return section


def _parse_recommendation(raw: Any, location: str) -> Recommendation:
    obj = _Obj(raw, location)
    rec_id = obj.str_("id")
    obj.label = f"recommendation '{rec_id}'"
    rec = Recommendation(
        id=rec_id,
        question_id=obj.str_("question_id"),
        text=obj.str_("text"),
        importance=obj.int_("importance"),
        trigger_answer_ids=obj.str_list("trigger_answer_ids"),
        resource_link=obj.str_("resource_link", required=False),
    )
    obj.finish()
    return rec


def parse_bank(source: bytes | str | io.IOBase) -> QuestionBank:
    """Parse a bank document into a model without cross-checking references.

    Accepts raw bytes, text, or a readable file object. Deterministic: the
    same bytes always produce the same model or the same error.
    """
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BankParseError(f"document is not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise BankParseError(f"malformed JSON: {exc}") from exc

    obj = _Obj(data, "$")
    version = obj.str_("format_version")
    if version not in SUPPORTED_FORMAT_VERSIONS:
        raise BankParseError(
            f"unsupported format_version {version!r} (supported: {', '.join(SUPPORTED_FORMAT_VERSIONS)})",
            "$.format_version",
        )
    comment = obj.str_("comment", required=False)
    sections = tuple(_parse_section(item, loc) for item, loc in obj.list_("sections"))
    recommendations = tuple(
        _parse_recommendation(item, loc) for item, loc in obj.list_("recommendations")
    )
    obj.finish()
    return QuestionBank(
        format_version=version,
        sections=sections,
        recommendations=recommendations,
        comment=comment,
    )


# --------------------------------------------------------------------------
# Serialization


def bank_to_document(bank: QuestionBank) -> dict[str, Any]:
    """Bank model back to the plain-dict document shape."""
    doc: dict[str, Any] = {"format_version": bank.format_version}
    if bank.comment is not None:
        doc["comment"] = bank.comment
    doc["sections"] = [
        {
            "id": s.id,
            "name": s.name,
            "description": s.description,
            "mandatory": s.mandatory,
            "time_estimate_minutes": s.time_estimate_minutes,
            "questions": [_question_to_document(q) for q in s.questions],
        }
        for s in bank.sections
    ]
    doc["recommendations"] = [
        {
            "id": r.id,
            "question_id": r.question_id,
            "text": r.text,
            "importance": r.importance,
            "trigger_answer_ids": list(r.trigger_answer_ids),
            **({"resource_link": r.resource_link} if r.resource_link is not None else {}),
        }
        for r in bank.recommendations
    ]
    return doc


def _question_to_document(q: Question) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": q.id,
        "text": q.text,
        "choice_type": q.choice_type.value,
        "answers": [{"id": a.id, "text": a.text, "risk_score": a.risk_score} for a in q.answers],
    }
    if q.help is not None:
        doc["help"] = q.help
    if q.trigger_answer_ids:
        doc["trigger_answer_ids"] = list(q.trigger_answer_ids)
    return doc


def serialize_bank(bank: QuestionBank) -> bytes:
    """Serialize to UTF-8 JSON such that ``parse_bank`` round-trips exactly."""
    text = json.dumps(bank_to_document(bank), ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# Validation


def validate_bank(bank: QuestionBank) -> BankDiagnostics:
    """Check every structural rule and return findings, errors first severity-wise.

    Error findings make a bank unusable; warning findings flag content that is
    legal but probably unintended (questions without help text, chained
    questions that can never be shown, recommendations that can never fire).
    The finding list is deterministic for a given bank.
    """
    findings: list[Finding] = []

    def error(code: str, subject: str, message: str) -> None:
        findings.append(Finding(ERROR, code, message, subject))

    def warning(code: str, subject: str, message: str) -> None:
        findings.append(Finding(WARNING, code, message, subject))

    # Global id uniqueness, walked in document order.
    seen: set[str] = set()

    def check_unique(kind: str, identifier: str) -> None:
        if identifier in seen:
            error("duplicate-id", identifier, f"{kind} id '{identifier}' is already in use")
        seen.add(identifier)

    for section in bank.sections:
        check_unique("section", section.id)
        for question in section.questions:
            check_unique("question", question.id)
            for answer in question.answers:
                check_unique("answer", answer.id)
    for rec in bank.recommendations:
        check_unique("recommendation", rec.id)

    mandatory_count = sum(1 for s in bank.sections if s.mandatory)
    if mandatory_count != 1:
        error(
            "mandatory-count",
            "bank",
            f"exactly one section must be mandatory, found {mandatory_count}",
        )

    def check_text(code_subject: str, text: str, what: str) -> None:
        if len(text) > MAX_TEXT_LENGTH:
            error(
                "text-length",
                code_subject,
                f"{what} is {len(text)} characters long, limit is {MAX_TEXT_LENGTH}",
            )

    for section in bank.sections:
        check_text(section.id, section.name, f"name of section '{section.id}'")
        check_text(section.id, section.description, f"description of section '{section.id}'")
        if section.time_estimate_minutes <= 0:
            error(
                "time-estimate",
                section.id,
                f"time_estimate_minutes of section '{section.id}' must be positive, "
                f"got {section.time_estimate_minutes}",
            )
        if not section.questions:
            error("empty-section", section.id, f"section '{section.id}' has no questions")
        for position, question in enumerate(section.questions):
            check_text(question.id, question.text, f"text of question '{question.id}'")
            if question.help is not None:
                check_text(question.id, question.help, f"help of question '{question.id}'")
            if len(question.answers) < 2:
                error(
                    "answer-arity",
                    question.id,
                    f"question '{question.id}' has {len(question.answers)} answers, needs at least 2",
                )
            for answer in question.answers:
                check_text(answer.id, answer.text, f"text of answer '{answer.id}'")
                if not 0 <= answer.risk_score <= 3:
                    error(
                        "risk-range",
                        answer.id,
                        f"risk_score of answer '{answer.id}' must be in [0, 3], "
                        f"got {answer.risk_score}",
                    )
            for trigger_id in question.trigger_answer_ids:
                owner = bank.question_of_answer.get(trigger_id)
                if owner is None:
                    error(
                        "unknown-trigger",
                        question.id,
                        f"question '{question.id}' is chained on unknown answer '{trigger_id}'",
                    )
                    continue
                owner_section = bank.section_of_question[owner.id]
                if owner_section.id != section.id:
                    error(
                        "cross-section-trigger",
                        question.id,
                        f"question '{question.id}' is chained on answer '{trigger_id}' "
                        f"of section '{owner_section.id}'; triggers must stay in section "
                        f"'{section.id}'",
                    )
                elif bank.question_index_in_section[owner.id] >= position:
                    error(
                        "forward-trigger",
                        question.id,
                        f"question '{question.id}' is chained on answer '{trigger_id}' of "
                        f"question '{owner.id}', which does not come before it",
                    )

    for rec in bank.recommendations:
        check_text(rec.id, rec.text, f"text of recommendation '{rec.id}'")
        if not 0 <= rec.importance <= 3:
            error(
                "importance-range",
                rec.id,
                f"importance of recommendation '{rec.id}' must be in [0, 3], got {rec.importance}",
            )
        if not rec.trigger_answer_ids:
            error(
                "rec-no-triggers",
                rec.id,
                f"recommendation '{rec.id}' has no trigger answers",
            )
        target = bank.questions_by_id.get(rec.question_id)
        if target is None:
            error(
                "unknown-question",
                rec.id,
                f"recommendation '{rec.id}' references unknown question '{rec.question_id}'",
            )
            continue
        own_answer_ids = {a.id for a in target.answers}
        for trigger_id in rec.trigger_answer_ids:
            if trigger_id not in bank.answers_by_id:
                error(
                    "unknown-trigger",
                    rec.id,
                    f"recommendation '{rec.id}' is triggered by unknown answer '{trigger_id}'",
                )
            elif trigger_id not in own_answer_ids:
                error(
                    "rec-trigger-mismatch",
                    rec.id,
                    f"recommendation '{rec.id}' is triggered by answer '{trigger_id}', "
                    f"which does not belong to its question '{rec.question_id}'",
                )

    reachable = _reachable_questions(bank)
    for section in bank.sections:
        for question in section.questions:
            if question.help is None:
                warning("no-help", question.id, f"question '{question.id}' has no help text")
            if question.is_chained and question.id not in reachable:
                warning(
                    "unreachable-question",
                    question.id,
                    f"chained question '{question.id}' can never be shown: no trigger is reachable",
                )
    for rec in bank.recommendations:
        target = bank.questions_by_id.get(rec.question_id)
        if target is not None and target.id not in reachable:
            warning(
                "dead-recommendation",
                rec.id,
                f"recommendation '{rec.id}' can never fire: its question "
                f"'{rec.question_id}' is unreachable",
            )

    return BankDiagnostics(findings=tuple(findings))


def _reachable_questions(bank: QuestionBank) -> set[str]:
    """Questions some respondent path can show, chained deps resolved transitively."""
    reachable: set[str] = set()
    for section in bank.sections:
        for question in section.questions:
            if not question.is_chained:
                reachable.add(question.id)
                continue
            for trigger_id in question.trigger_answer_ids:
                owner = bank.question_of_answer.get(trigger_id)
                # Triggers point strictly backwards in valid banks, so owners
                # are already classified when document order is followed.
                if owner is not None and owner.id in reachable:
                    reachable.add(question.id)
                    break
    return reachable


# --------------------------------------------------------------------------
# Loading gate


def load_bank(source: bytes | str | io.IOBase) -> QuestionBank:
    """Parse then validate; only error-free banks are returned."""
    bank = parse_bank(source)
    diagnostics = validate_bank(bank)
    if not diagnostics.ok:
        raise BankValidationError(diagnostics)
    return bank


def load_bank_file(path: str) -> QuestionBank:
    with open(path, "rb") as handle:
        return load_bank(handle.read())
