from fractions import Fraction

import pytest
import sympy
from sympy import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from gtilt.exact import GF, QQ, FpElement, Matrix, field_from_descriptor, nullspace, rank, rref, solve


def M(rows, F=QQ):
    return Matrix.from_rows(F, [[F(x) for x in r] for r in rows])


# -- fixed cases -------------------------------------------------------------------

def test_solve_identity_returns_rhs():
    b = M([[4], [-1], [7]])
    assert solve(Matrix.identity(QQ, 3), b) == b


def test_solve_inconsistent_rank_one_system():
    assert solve(M([[1, 2], [2, 4]]), M([[1], [3]])) is None


def test_solve_over_f5_back_substitution():
    F = GF(5)
    x = solve(M([[1, 1], [0, 1]], F), M([[0], [3]], F))
    assert x == M([[2], [3]], F)


def test_nullspace_examples():
    assert nullspace(Matrix.zeros(QQ, 2, 3)).cols == 3
    assert nullspace(M([[2, 1], [1, 1]])).cols == 0
    row = M([[1, 2, 3]])
    N = nullspace(row)
    assert N.cols == 2
    assert (row @ N).is_zero()


def test_rank_examples():
    assert rank(Matrix.identity(QQ, 4)) == 4
    assert rank(Matrix.zeros(QQ, 3, 2)) == 0
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_prime_field_arithmetic():
    F = GF(7)
    assert F(3) * F(5) == F(1)
    assert F(3) / F(5) == F(2)
    assert -F(1) == F(6)
    assert F(0) == F.zero and not F.zero
    with pytest.raises(ZeroDivisionError):
        F(1) / F(0)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        GF(6)


def test_rational_field_is_exact():
    assert QQ(1) / QQ(3) + QQ(2) / QQ(3) == QQ(1)
    assert isinstance(QQ("1/3"), Fraction)


def test_field_descriptors():
    assert field_from_descriptor("rational") is QQ or field_from_descriptor("rational") == QQ
    assert field_from_descriptor("11") == GF(11)


def test_mixing_primes_is_refused():
    with pytest.raises((TypeError, ValueError)):
        FpElement.__add__(GF(5)(1), GF(7)(1))


def test_determinant_and_inverse():
    A = M([[2, 1], [7, 4]])
    assert A.determinant() == 1
    assert A @ A.inverse() == Matrix.identity(QQ, 2)


# -- properties against sympy as an oracle ----------------------------------------

small = st.integers(-4, 4)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_agrees_with_sympy(rows):
    assert rank(M(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    A = M(rows)
    N = nullspace(A)
    assert N.cols == A.cols - rank(A)
    if N.cols:
        assert (A @ N).is_zero()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_agrees_with_sympy(rows, p):
    dm = DomainMatrix([[SGF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SGF(p))
    assert rank(M(rows, GF(p))) == dm.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_solves_consistent_systems(rows, xs):
    A = M(rows)
    x0 = M([[v] for v in xs[:A.cols]])
    b = A @ x0
    x = solve(A, b)
    assert x is not None and A @ x == b


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3))
def test_rref_is_idempotent_and_has_pivots(rows):
    R, piv = rref(M(rows))
    R2, piv2 = rref(R)
    assert R2 == R and piv2 == piv
    for i, c in enumerate(piv):
        assert R.data[i][c] == 1
        assert all(R.data[r][c] == 0 for r in range(R.rows) if r != i)
