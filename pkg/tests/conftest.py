import numpy as np
import pytest

from kahlerverify import catalog, harness


@pytest.fixture(scope="session")
def tn():
    return catalog.taub_nut(1.0)


@pytest.fixture(scope="session")
def tn3():
    return catalog.taub_nut(3.0)


@pytest.fixture(scope="session")
def flat():
    return catalog.flat_c2()


@pytest.fixture(scope="session")
def product():
    return catalog.product_geometry()


@pytest.fixture(scope="session")
def ball():
    return harness.ball_domain(1.0)


@pytest.fixture(scope="session")
def annulus12():
    return harness.annulus_domain(1.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
