import numpy as np
import pytest

from localphonon import ChainGeometry, TrapConfig

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def geo():
    return ChainGeometry.from_trap(TrapConfig())


@pytest.fixture(scope="session")
def kappa(geo):
    return float(geo.kappa[0, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
