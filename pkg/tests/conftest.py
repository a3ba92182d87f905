import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    title = getattr(item.function, "criterion", None)
    if title is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[title] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for title in sorted(_criteria, key=lambda t: int(t.split(".", 1)[0])):
        outcome, seconds = _criteria[title]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {title}  ({seconds:.1f} s)")
