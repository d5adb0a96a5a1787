import numpy as np
import pytest
from hypothesis import settings

from fibersource.modes import HE11, HE12, FiberGeometry, mode_table
from fibersource.phasematching import degenerate_tospdc_radius

settings.register_profile("fibersource", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("fibersource")

RADIUS = 0.395e-6


@pytest.fixture(scope="session")
def geometry():
    return FiberGeometry(RADIUS)


@pytest.fixture(scope="session")
def design_geometry():
    return FiberGeometry(degenerate_tospdc_radius(1.596))


@pytest.fixture(scope="session")
def he11(geometry):
    return mode_table(geometry, HE11)


@pytest.fixture(scope="session")
def he12(geometry):
    return mode_table(geometry, HE12)


def omega(um):
    return 2 * np.pi * 299792458.0 / (um * 1e-6)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
