import random

import pytest
from hypothesis import given, settings, strategies as st

from gtilt.algebra import FiniteAlgebra, NonSplitQuotient
from gtilt.exact import GF, QQ


def quadratic(F, c):
    """F[x]/(x^2 - c) with basis 1, x."""
    one, cc = F.one, F(c)
    table = [[[(0, one)], [(1, one)]], [[(1, one)], [(0, cc)]]]
    return FiniteAlgebra(F, table, [F.one, F.zero], [[F.one, F.zero]])


def matrix_algebra(F, n):
    """M_n(F) with basis E_ij at index i*n + j."""
    table = []
    for i in range(n):
        for j in range(n):
            row = []
            for k in range(n):
                for l in range(n):
                    row.append([(i * n + l, F.one)] if j == k else [])
            table.append(row)
    one = [F.one if i == j else F.zero for i in range(n) for j in range(n)]
    return FiniteAlgebra(F, table, one, [one])


def check_complete_orthogonal(R, idem):
    total = R.zero_vector()
    for a, e in enumerate(idem):
        assert R.mul(e, e) == e
        for b, f in enumerate(idem):
            if a != b:
                assert not any(R.mul(e, f))
        total = R.add(total, e)
    assert total == R.one


def test_split_quadratic_over_rationals():
    R = quadratic(QQ, 1)
    idem = R.primitive_idempotents()
    assert len(idem) == 2
    check_complete_orthogonal(R, idem)


def test_non_split_quadratic_is_reported():
    with pytest.raises(NonSplitQuotient):
        quadratic(QQ, -1).primitive_idempotents()


def test_quadratic_splits_mod_five():
    R = quadratic(GF(5), -1)
    idem = R.primitive_idempotents()
    assert len(idem) == 2
    check_complete_orthogonal(R, idem)


def test_local_algebra_has_one_idempotent():
    R = quadratic(QQ, 0)
    assert R.is_local()
    assert R.primitive_idempotents() == [R.one]
    assert len(R.radical_basis()) == 1


def test_matrix_algebra():
    R = matrix_algebra(QQ, 2)
    assert R.is_associative()
    assert R.radical_basis() == []
    idem = R.primitive_idempotents()
    assert len(idem) == 2
    check_complete_orthogonal(R, idem)
    assert R.with_idempotents(idem).projective_classes() == [0, 0]


def test_opposite_reverses_products(A2):
    op = A2.opposite()
    x, y = A2.arrow("a1"), A2.vertex_idempotent(0)
    assert op.mul(y, x) == A2.mul(x, y)


def test_corner_dimensions_match_cartan(A1):
    for i in range(3):
        for j in range(3):
            assert len(A1.corner_basis(i, j)) == A1.corner_dim(i, j) == A1.cartan_matrix()[i][j]


def test_unit_inverse_between_isomorphic_idempotents():
    R = matrix_algebra(QQ, 2)
    e11, e22 = R.basis_vector(0), R.basis_vector(3)
    S = R.with_idempotents([e11, e22])
    phi = R.basis_vector(1)            # E_12 lies in e11 R e22
    psi = S.unit_inverse(phi, 0, 1)
    assert psi is not None
    assert R.mul(phi, psi) == e11 and R.mul(psi, phi) == e22


def test_residue_detects_units(A1):
    e = A1.vertex_idempotent(0)
    x = A1.add(A1.scale(A1.field(3), e), A1.word(["a1", "a2", "a3"]))
    assert A1.residue(x, 0) == 3
    assert A1.residue(A1.word(["a1", "a2", "a3"]), 0) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_primitive_idempotents_of_path_algebras(A1, B, seed):
    rng = random.Random(seed)
    for A in (A1, B):
        idem = A.primitive_idempotents(rng=rng)
        assert len(idem) == 3
        check_complete_orthogonal(A, idem)
        # each e A e is local
        for e in idem:
            C, _ = A.corner_algebra(e)
            assert C.is_local()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_minimal_polynomial_annihilates(B, seed):
    rng = random.Random(seed)
    x = [B.field(rng.randint(-2, 2)) for _ in range(B.dim)]
    assert not any(B.eval_poly(B.minimal_polynomial(x), x))
