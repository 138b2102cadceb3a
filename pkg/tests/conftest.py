import pytest

from pslet import Precision, parse_potential


@pytest.fixture(scope="session")
def prec():
    return Precision(192)


@pytest.fixture(scope="session")
def truncated10():
    return parse_potential("-1/(r+10)")


@pytest.fixture(scope="session")
def coulomb():
    return parse_potential("-1/r")


@pytest.fixture(scope="session")
def harmonic():
    return parse_potential("r^2/2")
