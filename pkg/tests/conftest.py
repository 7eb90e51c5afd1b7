import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the outcome is taken from the test result."""
    entry = {"name": None, "detail": ""}

    def record(name, detail=""):
        entry["name"], entry["detail"] = name, detail

    yield record
    if entry["name"] is not None:
        rep = getattr(request.node, "rep_call", None)
        passed = rep is not None and rep.passed
        _CRITERIA.append((entry["name"], passed, entry["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
