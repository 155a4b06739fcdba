import pytest

from corpus import godel_corpus

_LINES = []


@pytest.fixture
def report():
    """Record one pass/fail line for the terminal summary and echo it."""
    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _LINES.append(line)
        print(line)
        return ok
    return record


@pytest.fixture(scope="session")
def gcorpus():
    return godel_corpus(seed=2024, size=200)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
