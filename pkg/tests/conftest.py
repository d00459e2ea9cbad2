import os
import sys
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from khtorsion.diagram import bundled_census, parse_pd
from khtorsion.homology import compute_homology
from khtorsion.invariants import classify

sys.path.insert(0, str(Path(__file__).parent))

from helpers import TREFOIL  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# criterion number -> (title, outcome); filled by the report hook below
ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        ACCEPTANCE[n] = (title, status, round(rep.duration, 2))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, status, secs = ACCEPTANCE[n]
        tr.write_line(f"criterion {n:2d}: {status}  {title}  ({secs}s)")


def stretch_enabled():
    return os.environ.get("KHTORSION_SKIP_STRETCH", "") not in ("1", "true", "yes")


class CensusResult:
    """Everything the suites need about one census entry."""

    def __init__(self, entry):
        self.entry = entry
        self.name = entry.name
        self.diagram = entry.diagram
        t0 = time.perf_counter()
        self.table = compute_homology(entry.diagram, reduced=True, primes=(2,))
        self.report = classify(self.table)
        self.seconds = time.perf_counter() - t0

    @property
    def alternating_nonsplit(self):
        m = self.entry.meta
        return bool(m.alternating) and m.split is not True


@pytest.fixture(scope="session")
def census_entries():
    return bundled_census()


@pytest.fixture(scope="session")
def census(census_entries):
    """Homology of every bundled census entry, computed once per session."""
    return {e.name: CensusResult(e) for e in census_entries}


@pytest.fixture(scope="session")
def trefoil():
    return parse_pd(TREFOIL, name="3_1")

