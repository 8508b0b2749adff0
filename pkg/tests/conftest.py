import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS: dict[int, tuple[str, str]] = {}


@contextmanager
def _timed(number: int, title: str, limit: float | None):
    start = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            note = f"{elapsed:.2f}s exceeds {limit:g}s"
            raise AssertionError(note)
        status, note = "PASS", f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
    except BaseException as exc:
        note = note or f"{type(exc).__name__}: {exc}"[:160]
        raise
    finally:
        line = f"criterion {number:2d} {status}: {title} [{note}]"
        _RESULTS[number] = (status, line)
        print(line)


@pytest.fixture
def criterion():
    return _timed


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n][1])
