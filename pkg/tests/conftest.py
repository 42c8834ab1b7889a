import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)

_CRITERIA: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the outcome is taken from the test result."""
    info = {"name": request.node.name, "detail": ""}

    def note(name, detail=""):
        info["name"], info["detail"] = name, detail

    yield note
    rep = getattr(request.node, "rep_call", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    _CRITERIA.append(f"[{status}] {info['name']}  {info['detail']}".rstrip())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
