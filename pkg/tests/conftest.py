from __future__ import annotations

from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
CORPUS = FIXTURES / "corpus"
GOLDEN = TESTS / "golden"


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture(autouse=True)
def _no_resource_override(monkeypatch):
    monkeypatch.delenv("ASAP_RESOURCES", raising=False)
