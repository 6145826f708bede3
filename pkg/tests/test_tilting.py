import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gtilt.complexes import ProjComplex, direct_sum, iso_complex, projective_resolution, shift, twist_complex
from gtilt.modules import injective, simple, syzygy
from gtilt.quiver import PathAlgebra, Quiver
from gtilt.tilting import (ConditionFails, DObject, GenerationUndecided, HypothesisFails, abe_hoshino_complete,
                           check_conditions, construct_orthogonal, dg_endo_cohomology, endomorphism_algebra,
                           matrices_match_up_to_relabeling, orthogonality_table, require_tilting,
                           verify_tilting)

from conftest import relations


def example_one_parts(A):
    P = ProjComplex.stalk(A, (1, 2), 0, "P")
    Q = ProjComplex(A, {0: (1,), 1: (0,)}, {0: [[A.arrow("a1")]]}, name="Q")
    return P, Q


def example_two_complex(A):
    return direct_sum([ProjComplex.stalk(A, (0, 1)), projective_resolution(injective(A, 2), 1)])


@pytest.fixture(scope="module")
def T1(A1):
    return direct_sum(list(example_one_parts(A1)))


# -- verification -------------------------------------------------------------------------

def test_example_one_is_tilting(T1):
    rep = verify_tilting(T1, window=(-4, 4), depth=4)
    assert rep.is_tilting
    assert rep.orthogonal and abs(rep.k0_det) == 1
    assert rep.generation.certified and rep.generation.length == 1
    assert len(rep.summands) == 3


def test_regular_complex_is_tilting_with_length_zero(A1, A2):
    for A in (A1, A2):
        rep = verify_tilting(ProjComplex.regular(A))
        assert rep.is_tilting and rep.generation.length == 0


def test_example_two_is_tilting(A2):
    rep = verify_tilting(example_two_complex(A2), window=(-3, 3))
    assert rep.is_tilting


def test_partial_complex_fails_generation(A1):
    P, _ = example_one_parts(A1)
    rep = verify_tilting(P, window=(-4, 4))
    assert not rep.is_tilting
    assert "iii" in rep.failed_conditions()
    assert rep.k0_det == 0
    assert rep.generation.residue is not None
    with pytest.raises(GenerationUndecided):
        require_tilting(P)


def test_non_orthogonal_complex_fails_condition_two(A1):
    T = direct_sum([ProjComplex.stalk(A1, (0,)), ProjComplex.stalk(A1, (0,), 1)])
    rep = verify_tilting(T)
    assert not rep.orthogonal and "ii" in rep.failed_conditions()


def test_report_is_serializable(T1):
    import json
    d = verify_tilting(T1, window=(-4, 4)).as_dict()
    assert json.loads(json.dumps(d)) == d


@settings(max_examples=6, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(-3, 3))
def test_shifts_of_tilting_complexes_are_tilting(T1, s):
    rep = verify_tilting(shift(T1, s), window=(-4, 4))
    assert rep.is_tilting


# -- endomorphism algebras --------------------------------------------------------------------

def test_endomorphism_algebra_of_example_one(A1, B):
    P, Q = example_one_parts(A1)
    E = endomorphism_algebra(None, parts=[ProjComplex.stalk(A1, (1,)), ProjComplex.stalk(A1, (2,)), Q])
    assert len(E.idempotents) == 3
    assert E.dim == B.dim == 10
    assert matrices_match_up_to_relabeling(E.arrows, B.arrow_matrix()) is not None
    assert matrices_match_up_to_relabeling(E.cartan, B.cartan_matrix()) is not None
    assert sum(map(sum, E.arrows)) == 4


def test_endomorphism_algebra_of_regular_is_opposite(A1, A2):
    for A in (A1, A2):
        E = endomorphism_algebra(ProjComplex.regular(A))
        assert E.dim == A.dim
        C = A.cartan_matrix()
        transposed = [list(r) for r in zip(*C)]
        assert matrices_match_up_to_relabeling(E.cartan, transposed) is not None


def test_relabeling_matcher():
    assert matrices_match_up_to_relabeling([[0, 1], [0, 0]], [[0, 0], [1, 0]]) == [1, 0]
    assert matrices_match_up_to_relabeling([[0, 1], [0, 0]], [[1, 0], [0, 0]]) is None


# -- conditions (a)-(e) ----------------------------------------------------------------------

def test_simples_pass_all_conditions(A1, action1):
    rep = check_conditions([simple(A1, i) for i in range(3)], action1, None, (-3, 3))
    assert rep.passed
    assert rep.results == {"a": True, "b": True, "c": True, "d": True, "e": True}
    assert rep.sigma == [0, 1, 2]


def test_swap_with_matching_g_set(A2, action2):
    rep = check_conditions([simple(A2, i) for i in range(3)], action2, {"s": [1, 0, 2]})
    assert rep.results["e"]


def test_scrambled_g_set_fails_condition_e(A1, action1):
    objs = [simple(A1, i) for i in range(3)]
    rep = check_conditions(objs, action1, {"g": [1, 2, 0]})
    assert not rep.passed
    labels = [lab for lab, _ in rep.failures]
    assert "e" in labels
    witness = dict(rep.failures)["e"]
    assert witness
    with pytest.raises(ConditionFails) as exc:
        check_conditions(objs, action1, {"g": [1, 2, 0]}, raise_on_fail=True)
    assert exc.value.label == "e"


def test_shifted_syzygies_are_accepted(A1, action1):
    objs = [(syzygy(simple(A1, i), 2), 2) for i in range(3)]
    rep = check_conditions(objs, action1)
    assert rep.results["b"] and rep.results["c"]


def test_negative_extension_fails_condition_a(A1):
    # Hom(S_1, S_2[2][-1]) = Ext^1(S_1, S_2) is one-dimensional
    objs = [DObject(module=simple(A1, 0), shift=0), DObject(module=simple(A1, 1), shift=2)]
    rep = check_conditions(objs)
    assert not rep.results["a"]
    assert any(lab == "a" for lab, _ in rep.failures)


# -- orthogonal families and the DG algebra --------------------------------------------------

def test_orthogonal_family_over_self_injective_algebra(A1, rng):
    X = [simple(A1, i) for i in range(3)]
    for side in ("projective", "injective"):
        T = construct_orthogonal(X, side)
        for i, Ti in enumerate(T):
            assert iso_complex(Ti, ProjComplex.stalk(A1, (i,)), rng) is not None
        table = orthogonality_table(T, X, side, (-3, 3))
        for (i, j), row in table.items():
            assert row == {m: int(i == j and m == 0) for m in range(-3, 4)}


def test_orthogonal_family_over_hereditary_algebra(A2, rng):
    T = construct_orthogonal([simple(A2, i) for i in range(3)], "projective")
    for i, Ti in enumerate(T):
        assert iso_complex(Ti, ProjComplex.stalk(A2, (i,)), rng) is not None


def test_injective_side_needs_self_injective(A2):
    with pytest.raises(ValueError):
        construct_orthogonal([simple(A2, i) for i in range(3)], "injective")


def test_dg_cohomology_vanishes_in_positive_degrees(A1):
    H = dg_endo_cohomology([simple(A1, i) for i in range(3)])
    assert all(H[m] == 0 for m in H if m > 0)
    assert H[0] == 12


def test_dg_cohomology_with_finite_group(A2, action2):
    X = [simple(A2, i) for i in range(3)]
    plain = dg_endo_cohomology(X)
    graded = dg_endo_cohomology(X, action=action2)
    # the swap moves P_1 to P_2, so the twisted Hom space has the same dimension
    assert graded[0] == 2 * plain[0]
    assert all(v == 0 for m, v in graded.items() if m > 0)


# -- completion ------------------------------------------------------------------------------

def test_completion_recovers_arrow_complex(A1, action1, rng):
    P, Q = example_one_parts(A1)
    Q2 = abe_hoshino_complete(P, action1)
    assert iso_complex(Q2, Q, rng) is not None


def test_completion_of_regular_is_zero(A1):
    assert abe_hoshino_complete(ProjComplex.regular(A1)).is_zero()


def test_completion_hypothesis_gate():
    Q = Quiver.from_arrows(3, {"a1": (0, 1), "a2": (1, 2), "a3": (2, 0)})
    A = PathAlgebra(Q, relations(Q, ["a1*a2*a3", "a2*a3*a1", "a3*a1*a2"]))
    with pytest.raises(HypothesisFails) as exc:
        abe_hoshino_complete(ProjComplex.stalk(A, (0,)))
    assert exc.value.witness is not None
