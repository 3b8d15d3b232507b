import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def record_criterion():
    """Collect ``(criterion, passed, detail)`` lines for the terminal summary."""

    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")


@pytest.fixture
def line3():
    """Three points on a line at 0, 1 and 2."""
    return np.array([[0.0], [1.0], [2.0]])
