import numpy as np
import pytest
from hypothesis import settings

from capbound import builtin_1d, builtin_2d, edge_form_axial, edge_form_vertex

settings.register_profile("capbound", max_examples=40, deadline=None)
settings.load_profile("capbound")

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def even():
    return builtin_1d("even")


@pytest.fixture(scope="session")
def odd():
    return builtin_1d("odd")


@pytest.fixture(scope="session")
def chg2():
    return builtin_1d("chg", 2)


@pytest.fixture(scope="session")
def chg3():
    return builtin_1d("chg", 3)


@pytest.fixture(scope="session")
def nak():
    return builtin_2d("nak")


@pytest.fixture(scope="session")
def rwim():
    return builtin_2d("rwim")


@pytest.fixture(scope="session")
def hard_square():
    return builtin_2d("hard-square")


@pytest.fixture(scope="session")
def nak_form(nak):
    return edge_form_vertex(nak, "nak")


@pytest.fixture(scope="session")
def even2_form(even):
    return edge_form_axial(even, even, "even2")


@pytest.fixture(scope="session")
def chg3_form(chg3):
    return edge_form_axial(chg3, chg3, "chg3x2")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
