import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jcstark import SystemParams

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (delta, chi) combinations used by the figure presets
FIGURE_COMBOS = [(0.0, 0.0), (0.0, 0.9), (0.3, 0.0), (0.3, 0.9)]


@pytest.fixture
def resonant():
    return SystemParams.from_detuning(0.0)


@pytest.fixture
def figure_d():
    return SystemParams.from_detuning(0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Acceptance criteria record one line each; printed after the run.
ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def record(number, title, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append((number, f"criterion {number:2d} {status}  {title}: {detail}"))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
