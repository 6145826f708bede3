import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gtilt.complexes import (ChainMap, ProjComplex, cone, decompose, derived_hom, direct_sum,
                             hom_basis, hom_dim, hom_homotopy, hom_total_complex, is_contractible,
                             is_minimal, is_null_homotopic, iso_complex, minimize, nakayama_complex,
                             projective_resolution, shift, summand_inventory, twist_complex)
from gtilt.modules import hom_dim as module_hom_dim, injective, projective, simple

from randcx import random_chain_map, random_complex

seeds = st.integers(0, 10 ** 6)
quick = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


def arrow_complex(A):
    """P_2 in degree 0 mapping to P_1 in degree 1 by the arrow a1."""
    return ProjComplex(A, {0: (1,), 1: (0,)}, {0: [[A.arrow("a1")]]}, name="Q")


# -- fixed cases ------------------------------------------------------------------------

def test_shift_round_trip(A1):
    Q = arrow_complex(A1)
    back = shift(shift(Q, 1), -1)
    assert back.describe() == Q.describe()


def test_shift_negates_differential(A1):
    Q = arrow_complex(A1)
    S = shift(Q, 1)
    assert S.terms == {-1: (1,), 0: (0,)}
    assert S.d(-1) == [[A1.scale(A1.field(-1), A1.arrow("a1"))]]


def test_contractibility(A1):
    assert is_contractible(ProjComplex.zero(A1))
    assert not is_contractible(ProjComplex.stalk(A1, (0,)))
    Q = arrow_complex(A1)
    assert is_contractible(cone(ChainMap.identity(Q)))


def test_stalk_hom_matches_module_hom(A1, A2):
    for A in (A1, A2):
        for i in range(3):
            for j in range(3):
                d = hom_dim(ProjComplex.stalk(A, (i,)), ProjComplex.stalk(A, (j,)), 0)
                assert d == module_hom_dim(projective(A, i), projective(A, j))


def test_arrow_complex_is_self_orthogonal(A1):
    Q = arrow_complex(A1)
    dims = {m: hom_dim(Q, Q, m) for m in range(-3, 4)}
    assert all(d == 0 for m, d in dims.items() if m != 0)
    assert dims[0] > 0


def test_cone_of_arrow_map_is_shifted_arrow_complex(A1, rng):
    P2, P1 = ProjComplex.stalk(A1, (1,)), ProjComplex.stalk(A1, (0,))
    f = ChainMap(P2, P1, 0, {0: [[A1.arrow("a1")]]})
    assert f.is_chain_map()
    C = cone(f)
    assert iso_complex(C, shift(arrow_complex(A1), 1), rng) is not None


def test_decomposition_examples(A1, A2, rng):
    P = ProjComplex.stalk(A2, (0,))
    assert len(decompose(direct_sum([P, P]), rng)) == 2
    parts = decompose(ProjComplex.regular(A1), rng)
    assert sorted(p.terms[0] for p in parts) == [(0,), (1,), (2,)]
    T = direct_sum([ProjComplex.stalk(A1, (1, 2)), arrow_complex(A1)])
    inv = summand_inventory(T, rng)
    assert sorted(k for _, k in inv) == [1, 1, 1]
    assert sorted(S.width for S, _ in inv) == [0, 0, 1]


def test_derived_hom_between_simples(A1):
    for i in range(3):
        for j in range(3):
            assert derived_hom(simple(A1, i), simple(A1, j), 0) == (i == j)
    assert [derived_hom(simple(A1, 0), simple(A1, j), 1) for j in range(3)] == [0, 1, 0]


def test_derived_hom_from_projective(A1):
    M = injective(A1, 1)
    for m in (-2, -1, 1, 2):
        assert derived_hom(projective(A1, 0), M, m) == 0
    assert derived_hom(projective(A1, 0), M, 0) == M.dims[0]


def test_resolution_of_simple(A1):
    R = projective_resolution(simple(A1, 0), 4)
    assert [R.terms[k] for k in range(-4, 1)] == [(2,), (2,), (1,), (1,), (0,)]
    assert is_minimal(R)


def test_nakayama_on_stalk_projectives(A1, rng):
    for i in range(3):
        P = ProjComplex.stalk(A1, (i,))
        assert iso_complex(nakayama_complex(P), P, rng) is not None


def test_nakayama_needs_self_injective(A2):
    with pytest.raises(ValueError):
        nakayama_complex(ProjComplex.stalk(A2, (0,)))


def test_null_homotopic_maps(A1):
    Q = arrow_complex(A1)
    C = cone(ChainMap.identity(Q))
    assert all(is_null_homotopic(f) for f in hom_basis(C, C, 0)) or not hom_basis(C, C, 0)
    assert not is_null_homotopic(ChainMap.identity(Q))


def test_twisted_complex_under_swap(A2, swap, rng):
    T = projective_resolution(injective(A2, 2), 1)
    assert iso_complex(twist_complex(swap, T), T, rng) is not None
    P1 = ProjComplex.stalk(A2, (0,))
    assert iso_complex(twist_complex(swap, P1), ProjComplex.stalk(A2, (1,)), rng) is not None


# -- properties on random complexes ----------------------------------------------------

@quick
@given(seeds)
def test_hom_routes_agree(A1, A2, seed):
    rng = random.Random(seed)
    for A in (A1, A2):
        T, U = random_complex(A, rng), random_complex(A, rng)
        for m in range(-2, 3):
            assert hom_dim(T, U, m) == hom_total_complex(T, U, m)
            assert hom_dim(T, U, m, via="modules") == hom_dim(T, U, m)


@quick
@given(seeds)
def test_hom_vanishes_beyond_width(A1, seed):
    rng = random.Random(seed)
    T = random_complex(A1, rng)
    for m in (T.width + 1, T.width + 2, -T.width - 1, -T.width - 2):
        assert hom_dim(T, T, m) == 0


@quick
@given(seeds)
def test_shift_moves_hom_degree(A2, seed):
    rng = random.Random(seed)
    T, U = random_complex(A2, rng), random_complex(A2, rng)
    for m in (-1, 0, 1):
        assert hom_dim(T, U, m) == hom_dim(T, shift(U, m), 0) == hom_dim(shift(T, -m), U, 0)


@quick
@given(seeds)
def test_minimize_keeps_homotopy_type(A1, seed):
    rng = random.Random(seed)
    T = random_complex(A1, rng)
    M = minimize(T)
    assert is_minimal(M)
    for m in range(-1, 2):
        assert hom_dim(M, M, m) == hom_dim(T, T, m) == hom_dim(T, M, m)


@quick
@given(seeds)
def test_hom_is_additive(A2, seed):
    rng = random.Random(seed)
    T, U, V = (random_complex(A2, rng, max_width=2) for _ in range(3))
    S = direct_sum([T, U])
    assert hom_dim(S, V, 0) == hom_dim(T, V, 0) + hom_dim(U, V, 0)
    assert hom_dim(V, S, 1) == hom_dim(V, T, 1) + hom_dim(V, U, 1)


@quick
@given(seeds)
def test_cone_of_identity_is_contractible(A1, seed):
    T = random_complex(A1, random.Random(seed), max_width=2)
    assert is_contractible(cone(ChainMap.identity(T)))


@quick
@given(seeds)
def test_cones_are_complexes_and_hom_basis_are_chain_maps(A1, seed):
    rng = random.Random(seed)
    T, U = random_complex(A1, rng, max_width=2), random_complex(A1, rng, max_width=2)
    for f in hom_basis(T, U, 0):
        assert f.is_chain_map()
    f = random_chain_map(T, U, 0, rng)
    if f is not None:
        cone(f).validate()


@quick
@given(seeds)
def test_decomposition_preserves_homotopy_type(A1, seed):
    rng = random.Random(seed)
    T = random_complex(A1, rng, max_width=2, max_mult=1)
    parts = decompose(T, rng)
    if parts:
        assert iso_complex(direct_sum(parts, A1), T, rng) is not None
    else:
        assert is_contractible(T)


@quick
@given(seeds)
def test_twist_commutes_with_cones(A2, swap, seed):
    rng = random.Random(seed)
    T, U = random_complex(A2, rng, max_width=2), random_complex(A2, rng, max_width=2)
    f = random_chain_map(T, U, 0, rng)
    if f is None:
        return
    gf = ChainMap(twist_complex(swap, T), twist_complex(swap, U), 0,
                  {k: [[swap(x) for x in row] for row in B] for k, B in f.blocks.items()})
    assert gf.is_chain_map()
    assert iso_complex(twist_complex(swap, cone(f)), cone(gf), rng) is not None
