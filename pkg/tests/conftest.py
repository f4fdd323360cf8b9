"""Shared fixtures: the built-in example systems and the fixed family of ten
permutation pairs used across the verification tests."""

import pytest

from kitealg.indexsys import IndexSystem

# the four built-in example systems (1-based images, n = 4)
EX_8_2 = ([1, 3, 2, 4], [2, 3, 1, 4])
EX_8_4 = ([1, 3, 2, 4], [2, 1, 4, 3])
EX_8_5 = ([2, 3, 1, 4], [1, 3, 4, 2])
EX_3_8 = ([2, 1, 4, 3], [4, 3, 2, 1])

# ten fixed permutation pairs, including all four example systems
TEN_SYSTEMS = [
    ("id-1", [1], [1]),
    ("swap-2", [1, 2], [2, 1]),
    ("equal-swap-2", [2, 1], [2, 1]),
    ("cycles-3", [2, 3, 1], [3, 1, 2]),
    ("id-cycle-3", [1, 2, 3], [2, 3, 1]),
    ("double-swap-4", [1, 2, 3, 4], [2, 1, 4, 3]),
    ("ex8.2", *EX_8_2),
    ("ex8.4", *EX_8_4),
    ("ex8.5", *EX_8_5),
    ("ex3.8", *EX_3_8),
]


def system(lam, rho) -> IndexSystem:
    return IndexSystem.from_one_based(lam, rho)


@pytest.fixture
def ex82():
    return system(*EX_8_2)


@pytest.fixture
def ex84():
    return system(*EX_8_4)


@pytest.fixture
def ex85():
    return system(*EX_8_5)


@pytest.fixture
def ex38():
    return system(*EX_3_8)
