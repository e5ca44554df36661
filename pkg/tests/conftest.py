import pytest

from contactloci.curves import point_configuration, resolve_plane_curve
from contactloci.model import Divisor, IntersectionCell, SncConfiguration


@pytest.fixture(scope="session")
def cusp():
    cfg, _ = resolve_plane_curve("x^2 + y^3")
    return cfg


@pytest.fixture(scope="session")
def node():
    cfg, _ = resolve_plane_curve("x*y")
    return cfg


@pytest.fixture(scope="session")
def power_r3():
    return point_configuration(3)


def hand_built_cusp() -> SncConfiguration:
    """The cusp configuration written out by hand, independent of the builder."""
    return SncConfiguration(
        ambient_dim=2,
        divisors=(
            Divisor(0, "E1", 2, 2, True, True, 0, -3),
            Divisor(1, "E2", 3, 3, True, True, 0, -2),
            Divisor(2, "E3", 6, 5, True, True, 0, -1),
            Divisor(3, "D", 1, 1, False, False, 0, None),
        ),
        cells=(
            IntersectionCell((0, 2), 1, True),
            IntersectionCell((1, 2), 1, True),
            IntersectionCell((2, 3), 1, True),
        ),
    )


def hand_built_node() -> SncConfiguration:
    return SncConfiguration(
        ambient_dim=2,
        divisors=(
            Divisor(0, "E", 2, 2, True, True, 0, -1),
            Divisor(1, "L1", 1, 1, False, False, 0, None),
            Divisor(2, "L2", 1, 1, False, False, 0, None),
        ),
        cells=(
            IntersectionCell((0, 1), 1, True),
            IntersectionCell((0, 2), 1, True),
        ),
    )
