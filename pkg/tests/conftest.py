import time

import pytest

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """run(number, title, limit_seconds, body): time body, record one PASS/FAIL line."""
    lines = request.config.stash.setdefault(_LINES, {})

    def run(number, title, limit, body):
        start = time.perf_counter()
        try:
            body()
        except BaseException as e:
            lines[number] = f"AC{number:02d} FAIL  {title}  ({type(e).__name__}: {e})"
            print(lines[number])
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < limit
        lines[number] = f"AC{number:02d} {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f}s, limit {limit}s]"
        print(lines[number])
        assert ok, f"took {elapsed:.2f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
