import pytest
from hypothesis import HealthCheck, settings

from tracelet_core import core

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("suite")


@pytest.fixture(autouse=True)
def _isolated_measurement(monkeypatch):
    """Keep the process-wide measurement and TRACELET_* env clean per test."""
    for var in (core.ENV_OUTPUT_DIR, core.ENV_SUBSTRATES, core.ENV_BUFFER_CAPACITY):
        monkeypatch.delenv(var, raising=False)
    yield
    leftover = core.current()
    if leftover is not None:
        leftover.finalize()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for status, word in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            if getattr(report, "when", "call") != "call" and status == "passed":
                continue
            lines.append((nodeid, word))
    if lines:
        terminalreporter.section("acceptance criteria")
        for nodeid, word in sorted(set(lines)):
            terminalreporter.write_line(f"{word}  {nodeid}")
