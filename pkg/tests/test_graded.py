import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gtilt.complexes import ProjComplex, direct_sum, hom_dim, projective_resolution, twist_complex
from gtilt.exact import GF
from gtilt.graded import (graded_tilting_direct, graded_tilting_via_identity_component, induced_term_dims,
                          induction_data, invariance, okuyama_precheck)
from gtilt.modules import injective, simple
from gtilt.quiver import Automorphism, GroupAction, InfiniteGroup, PathAlgebra

from randcx import random_complex


@pytest.fixture(scope="module")
def T1(A1):
    P = ProjComplex.stalk(A1, (1, 2))
    Q = ProjComplex(A1, {0: (1,), 1: (0,)}, {0: [[A1.arrow("a1")]]})
    return direct_sum([P, Q])


@pytest.fixture(scope="module")
def T2(A2):
    return direct_sum([ProjComplex.stalk(A2, (0, 1)), projective_resolution(injective(A2, 2), 1)])


@pytest.fixture(scope="module")
def induction2(A2, action2):
    return induction_data(A2, action2)


# -- invariance ----------------------------------------------------------------------------

def test_trivial_action_is_invariant(T1, A1):
    assert invariance(T1, GroupAction.trivial(A1)).invariant


def test_example_complexes_are_invariant(T1, T2, action1, action2):
    assert invariance(T1, action1).verdicts == {"g": "invariant"}
    assert invariance(T2, action2).verdicts == {"s": "invariant"}


def test_weak_invariance_and_failure(A2, action2):
    weak = ProjComplex.stalk(A2, (0, 1, 1))
    assert invariance(weak, action2).verdicts == {"s": "weakly invariant"}
    bad = invariance(ProjComplex.stalk(A2, (0,)), action2)
    assert bad.verdicts == {"s": "neither"} and not bad.weakly_invariant


# -- identity-component route ---------------------------------------------------------------

def test_example_one_graded_tilting(T1, action1):
    rep = graded_tilting_via_identity_component(T1, action1, window=(-4, 4))
    assert rep.verdict == "graded tilting"
    assert rep.strongly_graded and rep.crossed_product


def test_example_two_graded_tilting(T2, action2):
    rep = graded_tilting_via_identity_component(T2, action2, window=(-3, 3))
    assert rep.verdict == "graded tilting" and rep.crossed_product


def test_regular_complex_with_any_action(A2, action2):
    rep = graded_tilting_via_identity_component(ProjComplex.regular(A2), action2)
    assert rep.verdict == "graded tilting"


def test_non_invariant_complex_is_neither(A2, action2):
    rep = graded_tilting_via_identity_component(ProjComplex.stalk(A2, (0,)), action2)
    assert rep.verdict == "neither" and rep.identity is None


# -- direct route over A*G -----------------------------------------------------------------

def test_direct_route_agrees_on_example_two(T2, action2, induction2):
    d = graded_tilting_direct(T2, action2, window=(-3, 3), induction=induction2)
    assert d["R_dimension"] == 10
    assert d["report"].is_tilting
    assert d["identity_holds"]
    assert set(d["hom_decomposition"]) == set(range(-3, 4))
    assert d["hom_decomposition"][0] == (10, 10)


def test_direct_route_needs_finite_group(T1, action1):
    with pytest.raises(InfiniteGroup):
        graded_tilting_direct(T1, action1)


def test_direct_route_with_trivial_group(A2, T2):
    d = graded_tilting_direct(T2, GroupAction.trivial(A2))
    assert d["R_dimension"] == A2.dim and d["report"].is_tilting and d["identity_holds"]


def test_induction_is_multiplicative(T2, induction2):
    for k, (a, r) in induced_term_dims(T2, induction2).items():
        assert r == 2 * a


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 10 ** 6))
def test_hom_decomposition_on_random_complexes(A2, action2, induction2, seed):
    rng = random.Random(seed)
    T = random_complex(A2, rng, max_width=2)
    RT = induction2.induce(T)
    twists = [twist_complex(g, T) for g in action2.elements()]
    for m in range(-2, 3):
        assert hom_dim(RT, RT, m) == sum(hom_dim(T, gT, m) for gT in twists)


# -- Okuyama-style precheck ----------------------------------------------------------------

def test_precheck_with_simples(A1, action1):
    rep = okuyama_precheck([(simple(A1, i), 0) for i in range(3)], action1)
    assert rep.passed


def test_precheck_with_shifted_syzygies(A1, action1):
    rep = okuyama_precheck([(simple(A1, i), 2) for i in range(3)], action1)
    assert rep.passed


def test_precheck_rejects_modular_group_order():
    from conftest import two_arrows_into_sink
    A = PathAlgebra(two_arrows_into_sink().quiver, [], GF(2))
    s = Automorphism.from_strings(A, [1, 0, 2], {"a1": "a2", "a2": "a1"}, "s")
    act = GroupAction(A, {"s": s}, "finite", {"1": [], "s": ["s"]})
    with pytest.raises(ValueError):
        okuyama_precheck([(simple(A, i), 0) for i in range(3)], act)
