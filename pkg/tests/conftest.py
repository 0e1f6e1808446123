import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from skewstone.algebra import algebra_from_stalks, boolean_power, primitive  # noqa: E402
from skewstone.stone import FiniteBooleanSpace  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def small_profiles(max_size=12):
    """Stalk profiles whose section algebra stays small."""
    def size(p):
        out = 1
        for k in p:
            out *= k + 1
        return out
    return st.lists(st.integers(1, 4), max_size=3).map(
        lambda p: tuple(sorted(p, reverse=True))).filter(lambda p: size(p) <= max_size)


@pytest.fixture(scope="session")
def two():
    return primitive(0)


@pytest.fixture(scope="session")
def three():
    return primitive(1)


@pytest.fixture(scope="session")
def four():
    return primitive(2)


@pytest.fixture(scope="session")
def square():
    return boolean_power(2)


@pytest.fixture(scope="session")
def six():
    return algebra_from_stalks([2, 1])


@pytest.fixture(scope="session")
def X1():
    return FiniteBooleanSpace(("p",))


@pytest.fixture(scope="session")
def X2():
    return FiniteBooleanSpace(("p", "q"))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
