import os
import random

import pytest

from gtilt.quiver import Automorphism, GroupAction, PathAlgebra, Quiver, parse_combination

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "src", "gtilt", "data")


def relations(Q, exprs):
    out = []
    for text in exprs:
        rel = {}
        for c, words in parse_combination(text):
            rel[tuple(Q.arrow_index(w) for w in words)] = c
        out.append(rel)
    return out


def cyclic_nakayama():
    Q = Quiver.from_arrows(3, {"a1": (0, 1), "a2": (1, 2), "a3": (2, 0)})
    return PathAlgebra(Q, relations(Q, ["a1*a2*a3*a1", "a2*a3*a1*a2", "a3*a1*a2*a3"]), name="A1")


def two_arrows_into_sink():
    Q = Quiver.from_arrows(3, {"a1": (0, 2), "a2": (1, 2)})
    return PathAlgebra(Q, [], name="A2")


def b_algebra():
    Q = Quiver.from_arrows(3, {"a1": (0, 1), "a2": (1, 0), "b1": (1, 2), "b2": (2, 1)})
    return PathAlgebra(Q, relations(Q, ["a1*b1", "b2*a2", "a1*a2*a1", "b2*b1*b2", "a2*a1 - b1*b2"]),
                       name="B")


_CACHE = {}


def _cached(key, make):
    if key not in _CACHE:
        _CACHE[key] = make()
    return _CACHE[key]


@pytest.fixture(scope="session")
def A1():
    return _cached("A1", cyclic_nakayama)


@pytest.fixture(scope="session")
def A2():
    return _cached("A2", two_arrows_into_sink)


@pytest.fixture(scope="session")
def B():
    return _cached("B", b_algebra)


@pytest.fixture(scope="session")
def g1(A1):
    return Automorphism.from_strings(A1, [0, 1, 2], {"a2": "a2 + a2*a3*a1*a2", "a3": "a3 + a3*a1*a2*a3"}, "g")


@pytest.fixture(scope="session")
def action1(A1, g1):
    return GroupAction(A1, {"g": g1}, "free-cyclic")


@pytest.fixture(scope="session")
def swap(A2):
    return Automorphism.from_strings(A2, [1, 0, 2], {"a1": "a2", "a2": "a1"}, "s")


@pytest.fixture(scope="session")
def action2(A2, swap):
    return GroupAction(A2, {"s": swap}, "finite", {"1": [], "s": ["s"]})


@pytest.fixture
def rng():
    return random.Random(12345)


def spec_path(name):
    return os.path.abspath(os.path.join(DATA, name))
