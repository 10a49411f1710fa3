import pytest

_RESULTS = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number, title, ok, detail, elapsed, limit):
        ok = bool(ok) and elapsed < limit
        _RESULTS[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} | {detail} | {elapsed:.2f}s (< {limit:g}s)"
        print(_RESULTS[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[k])
