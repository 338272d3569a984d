from pathlib import Path

import pytest

from rsjir import Document, build_index

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def three_docs():
    return [Document("d1", "a b"), Document("d2", "b c"), Document("d3", "c d")]


@pytest.fixture
def three_doc_index(three_docs):
    return build_index(three_docs)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
