from fractions import Fraction

import pytest

from cfharm.core import Scenario, make_marginal, make_outcome_space, make_utility
from cfharm.joint import make_multiway_joint

Y = [f"y{i}" for i in range(1, 7)]

# corrected version of the rank-correlated three-treatment law (third cell on y3)
TB_JOINT_CELLS = {
    ("y4", "y5", "y6"): "1/6",
    ("y4", "y5", "y3"): "1/3",
    ("y4", "y2", "y3"): "1/3",
    ("y1", "y2", "y3"): "1/6",
}


@pytest.fixture(scope="session")
def space():
    return make_outcome_space(Y)


@pytest.fixture(scope="session")
def tb(space):
    m = lambda d: make_marginal(space, d)
    u = lambda vals: make_utility(space, dict(zip(Y, vals)))
    return Scenario(
        space,
        {
            "a1": m({"y1": "1/6", "y4": "5/6"}),
            "a2": m({"y2": "1/2", "y5": "1/2"}),
            "a3": m({"y3": "5/6", "y6": "1/6"}),
        },
        {
            "mu1": u([1, 2, 3, 4, 5, 6]),
            "mu2": u([0, 3, 4, 5, 9, 10]),
            "mu3": u([0, 1, 5, 8, 9, 10]),
        },
        standard_of_care="a1",
    )


@pytest.fixture(scope="session")
def a1(tb):
    return tb.treatments["a1"]


@pytest.fixture(scope="session")
def a2(tb):
    return tb.treatments["a2"]


@pytest.fixture(scope="session")
def a3(tb):
    return tb.treatments["a3"]


@pytest.fixture(scope="session")
def tb_joint(tb):
    return make_multiway_joint(tb, TB_JOINT_CELLS)


def F(s) -> Fraction:
    return Fraction(s)


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"{status}  {marker.args[0]}")
