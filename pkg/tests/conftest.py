"""
Shared fixtures: small graphs, their nets and homotopy engines
"""

import numpy as np
import pytest

from engine.homotopy import HomotopyEngine
from geometry.metric_graph import build_net, make_circle, make_star, make_torus_grid, make_wedge


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def circle():
    return make_circle(1.0)


@pytest.fixture(scope="session")
def circle_net(circle):
    # step 0.02, covering radius 0.01
    return build_net(circle, 0.02)


@pytest.fixture(scope="session")
def circle_engine(circle_net):
    return HomotopyEngine(circle_net)


@pytest.fixture(scope="session")
def wedge():
    return make_wedge([1.0, 2.0])


@pytest.fixture(scope="session")
def wedge_engine(wedge):
    return HomotopyEngine(build_net(wedge, 0.05))


@pytest.fixture(scope="session")
def star():
    return make_star([0.5, 0.7, 0.9])


@pytest.fixture(scope="session")
def star_engine(star):
    return HomotopyEngine(build_net(star, 0.05))


@pytest.fixture(scope="session")
def square_torus():
    return make_torus_grid(1.0 / 3.0, 1.0 / 3.0, 12)


@pytest.fixture(scope="session")
def square_torus_engine(square_torus):
    # vertex net: every edge has length 1/12
    return HomotopyEngine(build_net(square_torus, 1.0 / 12.0))
