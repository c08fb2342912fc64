import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wavechaos.spectral import atomic, discretize, riesz, to_spectral  # noqa: E402


@pytest.fixture
def pm_one():
    return atomic([[1.0], [-1.0]], [1.0, 1.0])


@pytest.fixture
def pm_pi():
    return atomic([[np.pi], [-np.pi]], [1.0, 1.0])


@pytest.fixture
def riesz_half():
    return to_spectral(riesz(0.5, 1))


@pytest.fixture
def riesz_half_discrete(riesz_half):
    return discretize(riesz_half)


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, passed, detail)."""
    def record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
