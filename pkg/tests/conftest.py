import pytest

from synchro import classify

# every report built anywhere in the run, re-checked at session end
REPORTS: list = []


@pytest.fixture(scope="session", autouse=True)
def record_reports():
    original = classify.ClassificationReport.__post_init__

    def recording(self):
        original(self)
        REPORTS.append(self)

    classify.ClassificationReport.__post_init__ = recording
    yield REPORTS
    classify.ClassificationReport.__post_init__ = original
    for report in REPORTS:
        classify.check_hierarchy(report.flags)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
