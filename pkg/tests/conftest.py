import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dnaspecies.ingest import DigitalDna  # noqa: E402

EXAMPLE_DNAS = {"user1": "AATTCCA", "user2": "TTCAAA", "user3": "TTTTTTT", "user4": "CCCCCCCT"}

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


def make_dnas(seqs, prefix="u"):
    if isinstance(seqs, dict):
        return [DigitalDna(k, v) for k, v in seqs.items()]
    return [DigitalDna(f"{prefix}{i}", s) for i, s in enumerate(seqs)]


@pytest.fixture
def example_dnas():
    return make_dnas(EXAMPLE_DNAS)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
