import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from routed_rag.harness import load_dataset
from routed_rag.kg import default_fixtures_dir, load_fixtures
from routed_rag.records import Question
from routed_rag.resources import data_path

GOLDEN = Path(__file__).parent / "golden"
EST = timezone(timedelta(hours=-5))
QT = datetime(2024, 2, 28, 10, 0, tzinfo=EST)


def make_question(text, qid="q", when=QT, **kw):
    return Question(id=qid, query=text, query_time=when, **kw)


@pytest.fixture(scope="session")
def mini_dataset():
    return load_dataset(data_path("mini_dataset.jsonl"))


@pytest.fixture(scope="session")
def kg_store():
    return load_fixtures(default_fixtures_dir())


@pytest.fixture
def acceptance(request):
    """Record a PASS/FAIL line for an acceptance criterion; see test_acceptance.py."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])
    return lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
