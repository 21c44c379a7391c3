import json
import os
import subprocess
import sys
from pathlib import Path

import pytest


@pytest.fixture(autouse=True)
def _clean_tracelet_env(monkeypatch):
    for var in list(os.environ):
        if var.startswith("TRACELET_"):
            monkeypatch.delenv(var)
    yield


@pytest.fixture
def preserve_env():
    """Restore os.environ after tests that drive launch phases in-process."""
    snapshot = dict(os.environ)
    yield
    os.environ.clear()
    os.environ.update(snapshot)


def scrubbed_env():
    return {k: v for k, v in os.environ.items() if not k.startswith("TRACELET_")}


def run_tool(args, cwd=None, check=False):
    """Run `python -m tracelet ...` in a fresh interpreter."""
    proc = subprocess.run(
        [sys.executable, "-m", "tracelet", *args],
        cwd=cwd,
        env=scrubbed_env(),
        capture_output=True,
        text=True,
    )
    if check and proc.returncode != 0:
        raise AssertionError(f"tracelet failed ({proc.returncode}): {proc.stderr}")
    return proc


def run_script(path, *args, cwd=None):
    """Run a script directly, the way a user would without the tool."""
    return subprocess.run(
        [sys.executable, str(path), *args],
        cwd=cwd,
        env=scrubbed_env(),
        capture_output=True,
        text=True,
    )


# The output files are consumed through their documented JSON schemas on
# purpose; these helpers stay independent of the core's reader code.

def read_definitions(outdir) -> dict:
    return json.loads((Path(outdir) / "definitions.json").read_text())


def read_events(outdir, location_id=0) -> list:
    path = Path(outdir) / f"events-{location_id}.jsonl"
    return [json.loads(line) for line in path.read_text().splitlines()]


def read_profile_doc(outdir) -> dict:
    return json.loads((Path(outdir) / "profile.json").read_text())


def region_stream(outdir, location_id=0) -> list:
    """Per-event (kind, region name, group, region kind) tuples for one location."""
    regions = {r["id"]: r for r in read_definitions(outdir)["regions"]}
    return [
        (e["k"], regions[e["r"]]["name"], regions[e["r"]]["group"], regions[e["r"]]["kind"])
        for e in read_events(outdir, location_id)
    ]


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
