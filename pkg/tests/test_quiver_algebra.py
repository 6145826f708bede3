import random

import pytest
from hypothesis import given, settings, strategies as st

from gtilt.exact import GF, QQ
from gtilt.quiver import (Automorphism, GroupAction, InfiniteDimensional, InfiniteGroup,
                          MalformedRelation, PathAlgebra, Quiver, SkewGroupAlgebra, parse_combination)

from conftest import relations


def count_paths_avoiding(Q, forbidden, max_len):
    """Brute-force oracle: paths of length <= max_len containing no forbidden word."""
    def ok(p):
        return not any(tuple(p[i:i + len(f)]) == f for f in forbidden for i in range(len(p) - len(f) + 1))
    total = Q.n_vertices
    frontier = [[a] for a in range(len(Q.arrows))]
    while frontier:
        frontier = [p for p in frontier if ok(p)]
        total += len(frontier)
        if len(frontier[0] if frontier else []) >= max_len:
            break
        frontier = [p + [b] for p in frontier for b in range(len(Q.arrows)) if Q.target(p[-1]) == Q.source(b)]
    return total


def test_cyclic_algebra_has_dimension_twelve(A1):
    forbidden = [tuple(A1.quiver.arrow_index(x) for x in w.split("*"))
                 for w in ("a1*a2*a3*a1", "a2*a3*a1*a2", "a3*a1*a2*a3")]
    assert A1.dim == 12
    assert count_paths_avoiding(A1.quiver, forbidden, 6) == 12


def test_two_arrow_quiver_dimension(A2):
    assert A2.dim == 5 == count_paths_avoiding(A2.quiver, [], 4)


def test_b_algebra_dimension(B):
    # e1 e2 e3, four arrows, then a1*a2, b2*b1 and a2*a1 = b1*b2; all length-3 paths vanish.
    assert B.dim == 10


def test_single_vertex():
    A = PathAlgebra(Quiver(1, (), ()), [])
    assert A.dim == 1 and A.format_element(A.one) == "e1"


def test_idempotents_are_orthogonal(A1):
    for i in range(3):
        ei = A1.vertex_idempotent(i)
        assert A1.mul(ei, ei) == ei
        for j in range(3):
            if i != j:
                assert not any(A1.mul(ei, A1.vertex_idempotent(j)))


def test_length_four_cycle_vanishes(A1):
    x = A1.word(["a1", "a2", "a3", "a1"])
    assert not any(x)
    assert any(A1.word(["a1", "a2", "a3"]))


def test_composition_is_left_to_right(A2):
    # a1 goes 1 -> 3, so e1 * a1 = a1 = a1 * e3
    a1 = A2.arrow("a1")
    assert A2.mul(A2.vertex_idempotent(0), a1) == a1
    assert A2.mul(a1, A2.vertex_idempotent(2)) == a1
    assert not any(A2.mul(a1, A2.vertex_idempotent(0)))


def test_cartan_matrices(A1, A2, B):
    assert A1.cartan_matrix() == [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    assert A2.cartan_matrix() == [[1, 0, 1], [0, 1, 1], [0, 0, 1]]
    assert B.cartan_matrix() == [[2, 1, 0], [1, 2, 1], [0, 1, 2]]


def test_arrow_matrix_recovers_quiver(A1, B):
    assert A1.arrow_matrix() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert B.arrow_matrix() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


def test_radical_dimension(A1, A2):
    assert len(A1.radical_basis()) == 9
    assert len(A2.radical_basis()) == 2


def test_malformed_relations():
    Q = Quiver.from_arrows(2, {"a": (0, 1), "b": (1, 0)})
    with pytest.raises(MalformedRelation):
        PathAlgebra(Q, relations(Q, ["a*a"]))
    with pytest.raises(MalformedRelation):
        PathAlgebra(Q, relations(Q, ["a"]))
    with pytest.raises(MalformedRelation):
        PathAlgebra(Q, relations(Q, ["a*b - b*a"]))


def test_infinite_dimensional_is_detected():
    Q = Quiver.from_arrows(1, {"x": (0, 0)})
    with pytest.raises(InfiniteDimensional):
        PathAlgebra(Q, [], length_cap=12)


def test_quiver_rejects_bad_endpoints():
    with pytest.raises(ValueError):
        Quiver.from_arrows(2, {"a": (0, 2)})


def test_parse_combination():
    assert parse_combination("2*a*b - c + 1/2") == [(2, ["a", "b"]), (-1, ["c"]), (parse_combination("1/2")[0][0], [])]
    with pytest.raises(ValueError):
        parse_combination("a +")


# -- automorphisms ---------------------------------------------------------------------

def test_example_one_generator(A1, g1):
    assert g1(A1.arrow("a1")) == A1.arrow("a1")
    assert g1(A1.arrow("a2")) == A1.element("a2 + a2*a3*a1*a2")
    # a2*a3*a1*a2 is a length-4 path, so g reduces to the identity on A
    assert g1.is_identity()


def test_invalid_automorphism_is_rejected(A1):
    with pytest.raises(ValueError):
        Automorphism.from_strings(A1, [1, 0, 2], {}, "bad")


def test_identity_automorphism(A2):
    idt = Automorphism.identity(A2)
    for k in range(A2.dim):
        assert idt(A2.basis_vector(k)) == A2.basis_vector(k)


def test_inverse_and_compose(A2, swap):
    assert swap.compose(swap).is_identity()
    assert swap.inverse() == swap


def random_element(A, rng):
    return [A.field(rng.randint(-3, 3)) for _ in range(A.dim)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_automorphisms_are_multiplicative(A1, A2, swap, seed):
    rng = random.Random(seed)
    g = Automorphism.from_strings(A1, [1, 2, 0], {"a1": "2*a2", "a2": "a3", "a3": "a1"}, "r")
    for A, h in ((A1, g), (A2, swap)):
        x, y = random_element(A, rng), random_element(A, rng)
        assert h(A.mul(x, y)) == A.mul(h(x), h(y))
        assert h(A.one) == A.one


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_multiplication_is_associative(B, seed):
    rng = random.Random(seed)
    x, y, z = (random_element(B, rng) for _ in range(3))
    assert B.mul(B.mul(x, y), z) == B.mul(x, B.mul(y, z))


def test_positive_characteristic_algebra():
    Q = Quiver.from_arrows(3, {"a1": (0, 1), "a2": (1, 2), "a3": (2, 0)})
    A = PathAlgebra(Q, relations(Q, ["a1*a2*a3*a1", "a2*a3*a1*a2", "a3*a1*a2*a3"]), GF(3))
    assert A.dim == 12 and A.is_associative()


# -- group actions and skew group algebras -----------------------------------------

def test_skew_group_algebra_dimension(A2, action2):
    R = SkewGroupAlgebra(A2, action2)
    assert R.dim == 10
    assert R.is_associative()
    assert R.is_strongly_graded() and R.grading_respected()


def test_skew_product_rule(A2, action2):
    R = SkewGroupAlgebra(A2, action2)
    s_index = action2.element_names.index("s")
    e1s = R.zero_vector()
    e1 = A2.vertex_idempotent(0)
    for k, c in enumerate(e1):
        e1s[s_index * A2.dim + k] = c
    # (e1 (x) s)(e1 (x) s) = e1 s(e1) (x) s^2 = e1 e2 (x) 1 = 0
    assert not any(R.mul(e1s, e1s))


def test_trivial_group_gives_same_table(A2):
    R = SkewGroupAlgebra(A2, GroupAction.trivial(A2))
    assert R.dim == A2.dim and R.table == A2.table


def test_free_cyclic_has_no_skew_algebra(A1, action1):
    with pytest.raises(InfiniteGroup):
        SkewGroupAlgebra(A1, action1)


def test_finite_action_requires_closure(A2, swap):
    with pytest.raises(ValueError):
        GroupAction(A2, {"s": swap}, "finite", {"s": ["s"]})
