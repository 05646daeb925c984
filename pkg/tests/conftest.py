import os

from hypothesis import HealthCheck, settings
import pytest

settings.register_profile(
    "repo", derandomize=True, deadline=None, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

ACCEPTANCE = {}
_property_failures = []


def pytest_configure(config):
    config.addinivalue_line("markers", "property: hypothesis property suite")
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.failed and "property" in report.keywords:
        _property_failures.append(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance")
    for n in sorted(ACCEPTANCE):
        ok, seconds, limit, note = ACCEPTANCE[n]
        if n == 9 and _property_failures:
            ok, note = False, f"{len(_property_failures)} property test(s) failed"
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {seconds:7.2f}s / {limit}s  {note}")


@pytest.fixture
def record():
    """Store an acceptance outcome for the summary table."""
    def _record(n, ok, seconds, limit, note=""):
        ACCEPTANCE[n] = (ok, seconds, limit, note)
    return _record
