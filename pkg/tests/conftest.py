import pytest

# criterion number -> (title, passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {n}. {title}: {detail}")


@pytest.fixture
def acceptance():
    def report(n, title, passed, detail):
        ACCEPTANCE[n] = (title, bool(passed), detail)
        print(f"[{'PASS' if passed else 'FAIL'}] {n}. {title}: {detail}")
        return passed

    return report
