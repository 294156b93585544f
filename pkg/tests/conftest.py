import math

import pytest

from opaent import paper_params

# Gain / temperature pairs quoted with the theta sweeps
FIG2_SETS = [(10e-3, 5.6), (100e-3, 5.0), (1.0, 3.0)]


@pytest.fixture
def params():
    return paper_params()


@pytest.fixture
def kappa(params):
    return params.kappa


@pytest.fixture
def opa_on(params):
    return params.with_gain_in_kappa(5.6).replace(opa_phase=math.pi / 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
