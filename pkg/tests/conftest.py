from __future__ import annotations

import copy
import json
from pathlib import Path

import pytest

from quantumwatch import QuestionBank, load_bank

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"
REPO_ROOT = Path(__file__).parent.parent
SHIPPED_BANK = REPO_ROOT / "banks" / "quantum-watch.json"


@pytest.fixture(scope="session")
def minibank_path() -> Path:
    return DATA_DIR / "minibank.json"


@pytest.fixture(scope="session")
def minibank(minibank_path) -> QuestionBank:
    return load_bank(minibank_path.read_bytes())


@pytest.fixture()
def minibank_document(minibank_path) -> dict:
    """A fresh mutable copy of the fixture document, for mutation tests."""
    return copy.deepcopy(json.loads(minibank_path.read_text()))


@pytest.fixture(scope="session")
def shipped_bank_path() -> Path:
    return SHIPPED_BANK


@pytest.fixture(scope="session")
def shipped_bank(shipped_bank_path) -> QuestionBank:
    return load_bank(shipped_bank_path.read_bytes())


def minimal_document() -> dict:
    """Smallest legal bank: one mandatory section, one single-choice question."""
    return {
        "format_version": "1",
        "sections": [
            {
                "id": "only",
                "name": "Only section",
                "description": "One question.",
                "mandatory": True,
                "time_estimate_minutes": 1,
                "questions": [
                    {
                        "id": "only-q",
                        "text": "Pick one.",
                        "choice_type": "single",
                        "answers": [
                            {"id": "only-a1", "text": "First", "risk_score": 0},
                            {"id": "only-a2", "text": "Second", "risk_score": 1},
                        ],
                    }
                ],
            }
        ],
        "recommendations": [],
    }
