import time
from contextlib import contextmanager

import pytest

_RESULTS: list[str] = []


@pytest.fixture
def acceptance():
    """Time a criterion, enforce its limit and record one pass/fail line."""

    @contextmanager
    def criterion(number: int, title: str, limit: float):
        start = time.perf_counter()
        ok = False
        detail = ""
        try:
            yield
            elapsed = time.perf_counter() - start
            ok = elapsed < limit
            if not ok:
                detail = f" over the {limit:g} s limit"
        except Exception as e:
            elapsed = time.perf_counter() - start
            detail = f" {type(e).__name__}: {e}".split("\n")[0]
            raise
        finally:
            line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'} "
                    f"({elapsed:.2f}s / {limit:g}s) {title}{detail}")
            print(line)
            _RESULTS.append(line)
        assert ok, line

    return criterion


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RESULTS):
            terminalreporter.write_line(line)
