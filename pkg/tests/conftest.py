import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# A fixed non-normal matrix used across modules; mu frozen from the
# diagonal-unitary spectral-radius oracle (tests/oracles.py: mu_by_phases).
A_FIX = np.array([[0.3, 0.5, -0.2j], [0.1 + 0.4j, -0.2, 0.3], [0.25, 0.1j, 0.4]])
MU_A_FIX = 0.8083321559744855
ONES7 = np.ones(7, dtype=complex)


@pytest.fixture
def a_fix():
    return A_FIX.copy()


# One line per acceptance criterion, filled in by tests/test_acceptance.py and
# printed at the end of the run.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
