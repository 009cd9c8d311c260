import math

import numpy as np
import pytest

from frmod import frmod_spec

# (d, (q0, q1), lambda0) combinations exercised across the suite
GRID_DS = (0.1, 0.25, 0.4)
GRID_QS = ((1.0, 0.0), (1.0, 1.0), (2.0, -1.0))
GRID_LAMS = (math.pi / 4, 2.0 * math.pi / 3)

SPEC_GRID = [frmod_spec(d, lam, q0, q1)
             for d in GRID_DS for (q0, q1) in GRID_QS for lam in GRID_LAMS]

# shared acceptance results, printed by pytest_terminal_summary
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


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
