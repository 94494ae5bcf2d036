import numpy as np
import pytest

from sturmspec import Grid, OperatorSpec, Potential, RobinAngles

PI = np.pi


@pytest.fixture(scope="session")
def grid2000():
    return Grid.make(2000)


@pytest.fixture(scope="session")
def neumann_base(grid2000):
    """Zero potential with both angles at pi/2 (spectrum n^2)."""
    return OperatorSpec(Potential.zero(grid2000), RobinAngles(PI / 2, PI / 2))


def make_operator(qfunc, alpha, beta, m=2000):
    grid = Grid.make(m)
    return OperatorSpec(Potential.from_callable(grid, lambda x: qfunc(x) + 0.0 * x),
                        RobinAngles(alpha, beta))


@pytest.fixture(scope="session")
def bump_operator():
    """Smooth symmetric potential with complementary non-Neumann angles."""
    return make_operator(lambda x: x * (PI - x) / 5.0, PI / 3, 2 * PI / 3)
