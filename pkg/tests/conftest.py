import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(id, label, measured, bound, passed)."""
    def record(cid, label, measured, bound, passed):
        _ACCEPTANCE.append((cid, label, measured, bound, bool(passed)))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, label, measured, bound, passed in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] {cid:<4} {label}: "
                      f"measured {measured}, bound {bound}")
