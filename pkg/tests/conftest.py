import pytest

ACCEPTANCE_FILE = "test_acceptance.py"
_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.fspath.basename != ACCEPTANCE_FILE:
        return
    label = (item.function.__doc__ or item.name).strip().splitlines()[0]
    callspec = getattr(item, "callspec", None)
    if callspec is not None:
        label = f"{label} [{callspec.id}]"
    if report.when == "call" or report.failed:
        _outcomes[item.nodeid] = (label, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in _outcomes.values():
        terminalreporter.write_line(f"{verdict}  {label}")
