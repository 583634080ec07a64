import pytest

from radial_uncertainty import hydrogen as H
from radial_uncertainty.radial_numerics import sample_hydrogen

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def hydrogen_samples():
    """Auto-gridded samples of every hydrogen state with n <= 8."""
    return {q: sample_hydrogen(q) for q in H.all_states(8)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
