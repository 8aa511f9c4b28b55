import pytest

_ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """Record (criterion number, passed, detail) for the end-of-run summary."""
    def _rec(num: int, passed: bool, detail: str):
        _ACCEPTANCE[num] = (bool(passed), detail)
    return _rec


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
