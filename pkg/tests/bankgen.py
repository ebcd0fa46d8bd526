"""Seeded random bank generator for equivalence testing.

Generated banks stay small enough to enumerate exhaustively: at most 10
questions of up to 4 answers, at most 2 chain links, and an upper bound on the
size of the answer space. Every generated bank passes the validation gate.
"""

from __future__ import annotations

import json
import random

from quantumwatch import QuestionBank, load_bank

MAX_STATE_SPACE = 1000


def _state_space_bound(sections: list[dict]) -> int:
    bound = 1
    for section in sections:
        for question in section["questions"]:
            n = len(question["answers"])
            bound *= (n + 1) if question["choice_type"] == "single" else 2 ** n
    return bound


def random_bank(rng: random.Random) -> QuestionBank:
    while True:
        doc = _random_document(rng)
        if _state_space_bound(doc["sections"]) <= MAX_STATE_SPACE:
            return load_bank(json.dumps(doc))


def _random_document(rng: random.Random) -> dict:
    section_count = rng.choice([1, 1, 2])
    question_total = rng.randint(2, 6)
    counter = iter(range(1000))

    sections = []
    remaining = question_total
    for s in range(section_count):
        take = remaining if s == section_count - 1 else rng.randint(1, remaining - (section_count - 1 - s))
        remaining -= take
        questions = []
        for _ in range(take):
            qn = next(counter)
            answer_count = rng.randint(2, 4)
            questions.append({
                "id": f"q{qn}",
                "text": f"Question {qn}",
                "choice_type": rng.choice(["single", "multiple"]),
                "answers": [
                    {"id": f"q{qn}x{a}", "text": f"Answer {a}", "risk_score": rng.randint(0, 3)}
                    for a in range(answer_count)
                ],
            })
        sections.append({
            "id": f"s{s}",
            "name": f"Section {s}",
            "description": "Generated.",
            "mandatory": s == 0,
            "time_estimate_minutes": rng.randint(1, 9),
            "questions": questions,
        })

    # Up to two chain links, each triggering on answers of a strictly
    # earlier question in the same section.
    chainable = [
        (section, i)
        for section in sections
        for i in range(1, len(section["questions"]))
    ]
    rng.shuffle(chainable)
    for section, position in chainable[: rng.randint(0, 2)]:
        earlier = section["questions"][rng.randrange(position)]
        triggers = rng.sample(
            [a["id"] for a in earlier["answers"]],
            k=rng.randint(1, min(2, len(earlier["answers"]))),
        )
        section["questions"][position]["trigger_answer_ids"] = sorted(triggers)

    recommendations = []
    all_questions = [q for section in sections for q in section["questions"]]
    for r in range(rng.randint(0, 4)):
        question = rng.choice(all_questions)
        triggers = rng.sample(
            [a["id"] for a in question["answers"]],
            k=rng.randint(1, len(question["answers"])),
        )
        recommendations.append({
            "id": f"r{r}",
            "question_id": question["id"],
            "text": f"Recommendation {r}",
            "importance": rng.randint(0, 3),
            "trigger_answer_ids": sorted(triggers),
        })

    return {
        "format_version": "1",
        "sections": sections,
        "recommendations": recommendations,
    }
