"""Collects per-criterion verdicts and prints them after the run."""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, label): acceptance criterion enforced by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, label = mark.args
    if report.when == "call":
        _RESULTS[num] = (label, report.outcome == "passed")
    elif report.outcome not in ("passed",):
        # setup or teardown broke; the criterion did not hold
        _RESULTS.setdefault(num, (label, False))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        label, ok = _RESULTS[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"CRITERION {num}: {verdict} - {label}")
