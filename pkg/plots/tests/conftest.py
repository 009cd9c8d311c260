import subprocess
import sys

import pytest

ACCEPTANCE_RESULTS = []


def record_acceptance(number, description, passed, detail=""):
    ACCEPTANCE_RESULTS.append((number, description, passed, detail))
    assert passed, f"criterion {number} ({description}) failed: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2}: {description}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundles(tmp_path_factory):
    """All seven figure bundles, produced through the frmod CLI."""
    root = tmp_path_factory.mktemp("bundles")
    out = {}
    for which in range(1, 8):
        dest = root / f"fig{which}"
        res = subprocess.run(
            [sys.executable, "-m", "frmod.cli", "figure", str(which),
             "--out", str(dest)],
            capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        out[which] = dest / "manifest.json"
    return out
