from __future__ import annotations

import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    """criterion(n, title, ok, detail): record and print one acceptance line, then assert ok."""

    def record(n: int, title: str, ok: bool, detail: str = "") -> None:
        ok = bool(ok)
        _ACCEPTANCE[n] = (title, ok, detail)
        print(f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})", flush=True)
        assert ok, f"criterion {n} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
