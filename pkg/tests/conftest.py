import contextlib
import time

import pytest

from unitfrac.dickman import build_rho

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def rho_table():
    return build_rho(10.0)


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(number: int, title: str, budget_s: float):
        notes: list[str] = []
        t0 = time.perf_counter()
        try:
            yield notes
        except BaseException as exc:
            dt = time.perf_counter() - t0
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _ACCEPTANCE[number] = f"FAIL  criterion {number}: {title} ({dt:.2f}s) {'; '.join(notes)} :: {msg}"
            raise
        dt = time.perf_counter() - t0
        if dt >= budget_s:
            _ACCEPTANCE[number] = f"FAIL  criterion {number}: {title} ({dt:.2f}s, budget {budget_s}s)"
            pytest.fail(f"runtime {dt:.2f}s exceeds {budget_s}s")
        _ACCEPTANCE[number] = f"PASS  criterion {number}: {title} ({dt:.2f}s) {'; '.join(notes)}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k].rstrip())
