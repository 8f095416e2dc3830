import pytest

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def record(n, ok, detail):
    ACCEPTANCE[n] = "criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail)
    print(ACCEPTANCE[n])
    return ok


@pytest.fixture
def report():
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
