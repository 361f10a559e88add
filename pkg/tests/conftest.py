"""Shared pytest plumbing: acceptance criteria report lines.

The acceptance tests register one PASS/FAIL line per criterion; printing
them from the terminal-summary hook keeps them visible even under pytest's
fd-level output capture.
"""

CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
