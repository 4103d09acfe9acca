import time
from contextlib import contextmanager

import hypothesis
import pytest

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=400, deadline=None)
hypothesis.settings.load_profile("default")

_acceptance_lines: list[str] = []


@pytest.fixture
def criterion():
    """``with criterion(n, title, limit):`` records a pass/fail line for the acceptance summary."""

    @contextmanager
    def run(number, title, limit):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            line = f"criterion {number:2d} {status}  {title}  ({elapsed:.2f}s, limit {limit}s)"
            _acceptance_lines.append(line)
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
