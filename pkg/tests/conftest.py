"""Shared acceptance-summary plumbing.

The acceptance tests append one PASS/FAIL line per criterion to RESULTS;
the terminal-summary hook prints them after the run so the lines survive
pytest's output capture.
"""

RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
