import time

import pytest

_LINES = []


class CriterionLog:
    """Times one acceptance criterion and records a single pass/fail line."""

    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.start = time.perf_counter()

    def done(self, ok, note=""):
        elapsed = time.perf_counter() - self.start
        in_time = elapsed < self.limit
        verdict = "PASS" if ok and in_time else "FAIL"
        line = f"criterion {self.number}: {verdict}  {elapsed:7.2f}s (limit {self.limit:g}s)  {self.title}"
        if note:
            line += f"  [{note}]"
        _LINES.append((self.number, line))
        return ok and in_time


@pytest.fixture
def criterion():
    return CriterionLog


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
