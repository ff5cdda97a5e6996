"""Shared fixtures and the acceptance summary.

Tests marked ``@pytest.mark.criterion(n, "title")`` are collected into a
one-line-per-criterion PASS/FAIL summary at the end of the run.
"""

import pytest

_OUTCOMES: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if not marker:
        return
    number, title = marker
    ok = report.outcome == "passed"
    prev = _OUTCOMES.get(number)
    _OUTCOMES[number] = (title, ok and (prev is None or prev[1]))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, ok = _OUTCOMES[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20261016)
