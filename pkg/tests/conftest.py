"""Shared fixtures for the heavier computations, and the acceptance summary."""

from collections import defaultdict

import pytest

from halo.fredholm import charpoly

CRITERIA = {
    1: "p=2 N=1 invariants, i <= 10",
    2: "p=3 N=1 invariants, i <= 6",
    3: "N=1: mu = 0 and unit [1]-coefficient",
    4: "p=23 N=1 component 6",
    5: "level constants at N=3",
    6: "class-number identities",
    7: "slope predictor",
    8: "cross-module consistency",
    9: "property suites",
}

_results: dict[int, list[tuple[str, str, str | None]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(criterion, conditional=None): contributes to an acceptance criterion line"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[marker.args[0]].append((item.name, report.outcome, marker.kwargs.get("conditional")))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        rows = _results.get(n, [])
        if not rows:
            status, note = "NOT RUN", ""
        elif any(outcome == "failed" for _, outcome, _ in rows):
            failed = [name for name, outcome, _ in rows if outcome == "failed"]
            status, note = "FAIL", f" failed: {', '.join(failed)}"
        else:
            notes = sorted({c for _, o, c in rows if c})
            skipped = [name for name, outcome, _ in rows if outcome == "skipped"]
            status = "CONDITIONAL" if notes or skipped else "PASS"
            note = f" ({'; '.join(notes)})" if notes else ""
        terminalreporter.write_line(f"criterion {n}: {status}  {title}{note}")


@pytest.fixture(scope="session")
def p2_level1():
    """a_0..a_10 for p=2, N=1 at (2^250, w^56)."""
    return charpoly(1, 2, 0, 10, 250, 56)


@pytest.fixture(scope="session")
def p3_level1():
    return charpoly(1, 3, 0, 6, 98, 44)


@pytest.fixture(scope="session")
def p23_component6():
    return charpoly(1, 23, 6, 4, 20, 12)
