import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

_RESULTS: dict = {}


@contextmanager
def criterion(number: int, title: str, budget: float = None):
    """Record pass/fail and wall time of one acceptance criterion."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        _record(number, title, False, time.perf_counter() - start, str(exc).splitlines()[0][:120] if str(exc) else "")
        raise
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        _record(number, title, False, elapsed, f"took {elapsed:.1f}s, budget {budget}s")
        pytest.fail(f"criterion {number} over its time budget: {elapsed:.1f}s > {budget}s")
    _record(number, title, True, elapsed, "")


def _record(number, title, ok, elapsed, note):
    _RESULTS[number] = (title, ok, elapsed, note)
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {title}"
    print(line + (f" -- {note}" if note else ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, elapsed, note = _RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({elapsed:.2f}s)  {title}"
        terminalreporter.write_line(line + (f"  [{note}]" if note else ""))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
