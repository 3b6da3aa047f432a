import time

import pytest

_RESULTS: list[tuple[str, bool, str]] = []
_START = time.perf_counter()
SUITE_BUDGET_S = 300.0


@pytest.fixture
def record():
    """Log one acceptance-criterion outcome; the summary prints them all."""

    def rec(name: str, ok: bool, detail: str = "") -> None:
        _RESULTS.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")

    return rec


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, ok, detail in _RESULTS:
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    elapsed = time.perf_counter() - _START
    ok = elapsed < SUITE_BUDGET_S
    tr.write_line(f"{'PASS' if ok else 'FAIL'}  session runtime  {elapsed:.1f} s "
                  f"(budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if _RESULTS and time.perf_counter() - _START >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
