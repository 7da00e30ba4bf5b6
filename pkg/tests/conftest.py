"""Shared test plumbing.

The acceptance tests record one summary line per criterion; the hook
below replays them after the normal pytest output so the pass/fail
status of each criterion is visible even when stdout capture is on.
"""

from __future__ import annotations

import pytest

CRITERION_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion_log():
    def record(line: str) -> None:
        CRITERION_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
