from fractions import Fraction

import pytest

from linknav.linkage import new_linkage, partition


@pytest.fixture(scope="session")
def heptagon():
    return new_linkage([10, 1, 9, 4, 9, 2, 4])


@pytest.fixture(scope="session")
def pentagon():
    return new_linkage([1, 1, 1, 1, 1])


@pytest.fixture(scope="session")
def quad_two_circles():
    return new_linkage([1, 1, 1, Fraction(1, 2)])


@pytest.fixture(scope="session")
def quad_hexagon():
    return new_linkage([Fraction(5, 2), 1, 1, 1])


@pytest.fixture(scope="session")
def bow5():
    return new_linkage([1, 1, 1, 1, Fraction(7, 2)])


@pytest.fixture(scope="session")
def heptagon_trace():
    """Nine-step walk from ({3,6},{1,4,7},{2,5}) to ({5,6,7},{1,2},{3,4})."""
    return [
        partition({3, 6}, {1, 4, 7}, {2, 5}),
        partition({3, 6}, {1, 4}, {2, 5, 7}),
        partition({3, 4, 6}, {1}, {2, 5, 7}),
        partition({3, 4, 6}, {1, 2}, {5, 7}),
        partition({3, 4}, {1, 2}, {5, 7, 6}),
        partition({3, 4}, {1, 2, 7, 6}, {5}),
        partition({3}, {1, 2, 7, 6}, {5, 4}),
        partition({5, 3}, {1, 2, 7, 6}, {4}),
        partition({5}, {1, 2, 7, 6}, {3, 4}),
        partition({5, 6, 7}, {1, 2}, {3, 4}),
    ]


def random_linkage(rng, n, connected=None):
    """Rejection-sample a generic linkage with the requested connectivity."""
    from linknav.linkage import LinkageError

    while True:
        lengths = [Fraction(rng.randint(1, 12), rng.randint(1, 8)) for _ in range(n)]
        try:
            L = new_linkage(lengths)
        except LinkageError:
            continue
        if connected is None or L.is_connected() == connected:
            return L
