import pytest

from monoid_recon.corpus import (
    corpus_monoids,
    corpus_schemes,
    monoid_B,
    monoid_BxB,
    monoid_C2,
    monoid_C2xB,
    monoid_E,
    monoid_F3,
    monoid_T,
)


@pytest.fixture(scope="session")
def T():
    return monoid_T()


@pytest.fixture(scope="session")
def B():
    return monoid_B()


@pytest.fixture(scope="session")
def C2():
    return monoid_C2()


@pytest.fixture(scope="session")
def E():
    return monoid_E()


@pytest.fixture(scope="session")
def F3():
    return monoid_F3()


def pytest_generate_tests(metafunc):
    if "M" in metafunc.fixturenames:
        monoids = corpus_monoids()
        metafunc.parametrize("M", monoids, ids=[m.name for m in monoids])
    if "X" in metafunc.fixturenames:
        schemes = corpus_schemes()
        metafunc.parametrize("X", schemes, ids=[x.name for x in schemes])
