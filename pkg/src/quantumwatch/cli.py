"""Command-line entry point: validate, run, score, explore, serve.

Exit codes are a stable contract: 0 success, 1 validation or consistency
failure, 2 usage error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .bank import (
    BankParseError,
    BankValidationError,
    QuestionBank,
    Section,
    UnknownIdError,
    parse_bank,
    validate_bank,
)
from .chains import Selection, check_selection, next_question, prev_question, prune_hidden_answers
from .oracle import DEFAULT_ENUMERATION_LIMIT, report
from .scoring import AssessmentResult, assemble_result
from .service import ServiceConfig, create_app, result_payload

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

_TRUTHY = {"1", "true", "yes", "on"}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _load_validated_bank(path: str) -> QuestionBank:
    raw = _read_file(path)
    try:
        bank = parse_bank(raw)
    except BankParseError as exc:
        raise _Fail(EXIT_IO, f"cannot parse {path}: {exc}") from exc
    diagnostics = validate_bank(bank)
    if not diagnostics.ok:
        lines = [_format_finding(f) for f in diagnostics.errors]
        raise _Fail(EXIT_FAILURE, f"{path} failed validation:\n" + "\n".join(lines))
    return bank


def _format_finding(finding) -> str:
    return f"{finding.severity:<8}{finding.code:<24}{finding.subject_id}: {finding.message}"


def _split_ids(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [part for part in (p.strip() for p in raw.split(",")) if part]


# --------------------------------------------------------------------------
# validate


def cmd_validate(args: argparse.Namespace) -> int:
    raw = _read_file(args.bank)
    try:
        bank = parse_bank(raw)
    except BankParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    diagnostics = validate_bank(bank)
    for finding in diagnostics.findings:
        print(_format_finding(finding))
    errors, warnings = len(diagnostics.errors), len(diagnostics.warnings)
    print(
        f"{args.bank}: {len(bank.sections)} sections, {bank.question_count} questions, "
        f"{len(bank.recommendations)} recommendations - {errors} errors, {warnings} warnings"
    )
    if errors or (args.strict_warnings and warnings):
        return EXIT_FAILURE
    return EXIT_OK


# --------------------------------------------------------------------------
# run


def _pick_sections(bank: QuestionBank, raw: str | None) -> list[Section]:
    """Resolve the --sections flag (or prompt) to bank sections, mandatory included."""
    optional = [s for s in bank.sections if not s.mandatory]
    requested = _split_ids(raw)
    if not requested:
        if not optional:
            requested = []
        elif sys.stdin.isatty():
            print("Select the sections that apply (comma-separated ids):")
            for section in optional:
                print(f"  {section.id}  {section.name} - {section.description}")
            requested = _split_ids(input("> "))
        else:
            raise _Fail(EXIT_USAGE, "no terminal available: pass --sections id[,id...]")
    unknown = [sid for sid in requested if sid not in bank.sections_by_id]
    if unknown:
        raise _Fail(EXIT_USAGE, f"unknown section ids: {', '.join(unknown)}")
    chosen = set(requested)
    if bank.mandatory_section is not None:
        chosen.add(bank.mandatory_section.id)
    if optional and not (chosen & {s.id for s in optional}):
        raise _Fail(EXIT_USAGE, "select at least one non-mandatory section")
    return [section for section in bank.sections if section.id in chosen]


def _print_question(section: Section, index: int, question) -> None:
    label = "single choice" if question.choice_type.value == "single" else "multiple choice"
    print()
    print(f"[{section.name} - question {index + 1} of {len(section.questions)}] ({label})")
    print(question.text)
    for position, answer in enumerate(question.answers, start=1):
        marker = f"{position}."
        print(f"  {marker:<4}{answer.id:<14}{answer.text}")


def _parse_answer_tokens(question, line: str) -> list[str] | None:
    """Map a response line to answer ids; None means ask again."""
    tokens = [t for t in line.replace(",", " ").split() if t]
    known = {a.id for a in question.answers}
    ids = []
    for token in tokens:
        if token in known:
            ids.append(token)
            continue
        if token.isdigit() and 1 <= int(token) <= len(question.answers):
            ids.append(question.answers[int(token) - 1].id)
            continue
        print(f"  (no answer '{token}' here - use an id or a number)")
        return None
    if question.choice_type.value == "single" and len(ids) > 1:
        print("  (this question takes a single answer)")
        return None
    return list(dict.fromkeys(ids))


def _write_selection(path: str, selection: Selection) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(selection.to_payload(), handle, indent=2)
            handle.write("\n")
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _print_result(result: AssessmentResult, show_risk_value: bool = False) -> None:
    print()
    print(f"Risk category: {result.risk_category.value.upper()}")
    print(result.category_explanation)
    if show_risk_value:
        print(
            f"Risk value: {result.risk_percent:.2f}% "
            f"({result.breakdown.numerator}/{result.breakdown.denominator})"
        )
    total = len(result.recommendations_all)
    if not total:
        print("No recommendations - nothing triggered.")
        return
    shown = result.recommendations_top
    print(f"{total} recommendations, top {len(shown)} first:")
    _print_recommendations(shown, start=1)
    remaining = result.recommendations_all[len(shown):]
    if not remaining:
        return
    if sys.stdin.isatty():
        reply = input(f"See the remaining {len(remaining)}? [y/N] ").strip().lower()
        if reply not in ("y", "yes"):
            return
    _print_recommendations(remaining, start=len(shown) + 1)


def _print_recommendations(recommendations, start: int) -> None:
    for position, rec in enumerate(recommendations, start=start):
        print(f"  {position}. [importance {rec.importance}] {rec.text}")
        if rec.resource_link:
            print(f"      see {rec.resource_link}")


def cmd_run(args: argparse.Namespace) -> int:
    bank = _load_validated_bank(args.bank)
    sections = _pick_sections(bank, args.sections)
    section_ids = tuple(section.id for section in sections)
    answers_by_question: dict[str, list[str]] = {}

    def current_selection() -> Selection:
        ordered = [aid for ids in answers_by_question.values() for aid in ids]
        return Selection.of(section_ids, ordered)

    partial_path = args.answers_out or "answers.partial.json"
    try:
        for section in sections:
            index = next_question(bank, section.id, -1, current_selection())
            while index is not None:
                question = section.questions[index]
                _print_question(section, index, question)
                line = input("> ").strip()
                if line == "?":
                    print(f"  {question.help}" if question.help else "  (no help for this question)")
                    continue
                if line == "<":
                    previous = prev_question(bank, section.id, index, current_selection())
                    if previous is None:
                        print("  (already at the first question)")
                    else:
                        index = previous
                    continue
                if line:
                    ids = _parse_answer_tokens(question, line)
                    if ids is None:
                        continue
                    answers_by_question[question.id] = ids
                    # An edit can hide chained questions; their answers go too.
                    pruned = prune_hidden_answers(bank, current_selection())
                    kept = pruned.answer_set
                    for qid in list(answers_by_question):
                        answers_by_question[qid] = [
                            aid for aid in answers_by_question[qid] if aid in kept
                        ]
                        if not answers_by_question[qid]:
                            del answers_by_question[qid]
                index = next_question(bank, section.id, index, current_selection())
    except (EOFError, KeyboardInterrupt):
        _write_selection(partial_path, current_selection())
        print(f"\ninterrupted - partial answers saved to {partial_path}", file=sys.stderr)
        return EXIT_FAILURE

    selection = current_selection()
    if args.answers_out:
        _write_selection(args.answers_out, selection)
    violations = check_selection(bank, selection)
    if violations:
        for violation in violations:
            print(f"{violation.code} ({violation.subject_id}): {violation.message}", file=sys.stderr)
        return EXIT_FAILURE
    _print_result(assemble_result(bank, selection))
    return EXIT_OK


# --------------------------------------------------------------------------
# score


def cmd_score(args: argparse.Namespace) -> int:
    bank = _load_validated_bank(args.bank)
    raw = _read_file(args.answers)
    try:
        selection = Selection.from_payload(json.loads(raw.decode("utf-8")))
    except (ValueError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_IO, f"cannot parse {args.answers}: {exc}") from exc
    try:
        violations = check_selection(bank, selection)
    except UnknownIdError as exc:
        print(str(exc.args[0]), file=sys.stderr)
        return EXIT_FAILURE
    if violations:
        for violation in violations:
            print(f"{violation.code} ({violation.subject_id}): {violation.message}", file=sys.stderr)
        return EXIT_FAILURE
    result = assemble_result(bank, selection)
    if args.json:
        print(json.dumps(result_payload(result, expose_risk_value=args.show_risk_value), indent=2))
    else:
        _print_result(result, show_risk_value=args.show_risk_value)
    return EXIT_OK


# --------------------------------------------------------------------------
# explore


def cmd_explore(args: argparse.Namespace) -> int:
    bank = _load_validated_bank(args.bank)
    section_ids = _split_ids(args.sections) or [section.id for section in bank.sections]
    try:
        space = report(bank, section_ids, limit=args.limit)
    except (UnknownIdError, ValueError) as exc:
        raise _Fail(EXIT_USAGE, str(exc.args[0] if exc.args else exc)) from exc
    status = "truncated at limit" if space.truncated else "complete"
    print(f"Assignments enumerated: {space.assignments_enumerated} ({status})")
    print(f"Risk range: {space.min_risk:.2f}% .. {space.max_risk:.2f}%")
    counts = space.category_counts
    print(f"Categories: low {counts['low']}, medium {counts['medium']}, high {counts['high']}")
    if space.per_recommendation_trigger_counts:
        print("Recommendation trigger counts:")
        for rec_id, count in space.per_recommendation_trigger_counts.items():
            print(f"  {rec_id}: {count}")
    return EXIT_OK


# --------------------------------------------------------------------------
# serve


def _parse_addr(raw: str) -> tuple[str, int]:
    host, _, port = raw.rpartition(":")
    if not host or not port.isdigit():
        raise _Fail(EXIT_USAGE, f"--addr must look like host:port, got {raw!r}")
    return host, int(port)


def cmd_serve(args: argparse.Namespace) -> int:
    bank_path = args.bank or os.environ.get("BANK_PATH")
    if not bank_path:
        raise _Fail(EXIT_USAGE, "no bank: pass a path or set BANK_PATH")
    bank = _load_validated_bank(bank_path)
    addr = args.addr or os.environ.get("LISTEN_ADDR") or "127.0.0.1:8000"
    host, port = _parse_addr(addr)
    expose = args.expose_risk_value or (
        os.environ.get("EXPOSE_RISK_VALUE", "").strip().lower() in _TRUTHY
    )
    config = ServiceConfig(
        expose_risk_value=expose,
        cors_origins=tuple(args.cors_origin or ()),
        static_dir=args.static_dir,
    )
    print(
        f"serving {bank_path} on {host}:{port}: {len(bank.sections)} sections, "
        f"{bank.question_count} questions, {len(bank.recommendations)} recommendations"
        + (" (risk value exposed)" if expose else ""),
        file=sys.stderr,
    )
    import uvicorn

    uvicorn.run(create_app(bank, config), host=host, port=port, log_level="warning")
    return EXIT_OK


# --------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantumwatch",
        description="Questionnaire-driven security readiness assessment engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a bank file and print findings")
    p_validate.add_argument("bank")
    p_validate.add_argument("--strict-warnings", action="store_true")
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="answer the questionnaire in the terminal")
    p_run.add_argument("bank")
    p_run.add_argument("--sections", help="comma-separated non-mandatory section ids")
    p_run.add_argument("--answers-out", help="write the selection document here")
    p_run.set_defaults(func=cmd_run)

    p_score = sub.add_parser("score", help="score a saved selection document")
    p_score.add_argument("bank")
    p_score.add_argument("answers")
    p_score.add_argument("--json", action="store_true", help="emit the API response payload")
    p_score.add_argument("--show-risk-value", action="store_true")
    p_score.set_defaults(func=cmd_score)

    p_explore = sub.add_parser("explore", help="enumerate the answer space and report extremes")
    p_explore.add_argument("bank")
    p_explore.add_argument("--sections", help="comma-separated section ids (default: all)")
    p_explore.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_LIMIT)
    p_explore.set_defaults(func=cmd_explore)

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("bank", nargs="?", help="bank path (default: $BANK_PATH)")
    p_serve.add_argument("--addr", help="host:port (default: $LISTEN_ADDR or 127.0.0.1:8000)")
    p_serve.add_argument("--expose-risk-value", action="store_true")
    p_serve.add_argument("--static-dir", help="serve this directory at / (the web UI bundle)")
    p_serve.add_argument("--cors-origin", action="append", help="allowed origin, repeatable")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _Fail as fail:
        print(fail.message, file=sys.stderr)
        return fail.code
    except KeyboardInterrupt:
        return 130


def entrypoint() -> None:
    sys.exit(main())
