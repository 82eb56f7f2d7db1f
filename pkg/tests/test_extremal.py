import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from extremal_sp.algebra import NotExtremal, StructureLieAlgebra, extremal_form
from extremal_sp.extremal import (PairClass, check_condition_A, classify_pair, classify_pair_report,
                                  condition_B_quadratic, condition_B_witness, enumerate_extremal, exp_apply,
                                  exp_check, exp_matrix, extremal_mask, is_extremal, projective_normalize,
                                  sl2_extremal_points)
from extremal_sp.fields import FieldSpec
from extremal_sp.symplectic import standard_space
from extremal_sp.tensor_model import pure_coords, sf_algebra, sp_algebra


def heisenberg(F):
    C = F.zeros((3, 3, 3))
    C[0, 1, 2], C[1, 0, 2] = F.one, F.neg(F.one)
    return StructureLieAlgebra(F, C, (F.array([1, 0, 0]), F.array([0, 1, 0])))


@pytest.fixture(scope="module")
def sp4_f5():
    return sp_algebra(FieldSpec.prime(5), 2)


def test_brute_force_sl2_f3():
    L = sp_algebra(FieldSpec.prime(3), 1)
    X = enumerate_extremal(L)
    assert len(X) == 8  # 4 points times 2 scalars


def test_pure_tensors_are_pure_extremal(sp4_f3):
    s = standard_space(sp4_f3.field, 2)
    for v in itertools.product(range(3), repeat=4):
        if any(v):
            st_ = is_extremal(sp4_f3, pure_coords(s, s.vector(v)))
            assert st_.extremal and st_.pure


def test_non_pure_rank_two_is_not_extremal(sp4_f3):
    x = sp4_f3.element(sp4_f3.extremal_generators[0] + sp4_f3.extremal_generators[1])
    assert not is_extremal(sp4_f3, x).extremal


def test_zero_is_rejected(sp4_f3):
    with pytest.raises(ValueError, match="zero element"):
        is_extremal(sp4_f3, sp4_f3.zero())


def test_projective_normalize():
    F = FieldSpec.prime(5)
    assert list(projective_normalize(F, F.array([0, 3, 1]))) == [0, 1, 2]


def test_pair_classes_in_sp4(sp4_f3):
    F = sp4_f3.field
    s = standard_space(F, 2)
    e = lambda *v: pure_coords(s, s.vector(v))  # noqa: E731
    assert classify_pair(sp4_f3, e(1, 0, 0, 0), e(2, 0, 0, 0)) is PairClass.SamePoint
    assert classify_pair(sp4_f3, e(1, 0, 0, 0), e(0, 1, 0, 0)) is PairClass.CommutingRigid
    assert classify_pair(sp4_f3, e(1, 0, 0, 0), e(0, 0, 1, 0)) is PairClass.Sl2


def test_pair_class_extremal_line_from_radical():
    F = FieldSpec.prime(3)
    s = standard_space(F, 1, 2)
    L = sf_algebra(s)
    r1, r2 = pure_coords(s, s.vector([0, 0, 1, 0])), pure_coords(s, s.vector([0, 0, 0, 1]))
    assert is_extremal(L, r1).sandwich
    assert classify_pair(L, r1, r2) is PairClass.CommutingExtremalLine


def test_pair_class_bracket_extremal_synthetic():
    F = FieldSpec.prime(5)
    H = heisenberg(F)
    x, y = H.extremal_generators
    assert is_extremal(H, x).sandwich
    assert classify_pair(H, x, y) is PairClass.CommutingBracketExtremal


def test_rational_pair_classification_is_flagged_sampled():
    L = sp_algebra(FieldSpec.rational(), 2)
    s = standard_space(L.field, 2)
    rep = classify_pair_report(L, pure_coords(s, s.vector([1, 0, 0, 0])), pure_coords(s, s.vector([0, 1, 0, 0])))
    assert rep.kind is PairClass.CommutingRigid and rep.sampled


def test_classify_needs_extremal_inputs(sp4_f3):
    x = sp4_f3.element(sp4_f3.extremal_generators[0] + sp4_f3.extremal_generators[1])
    with pytest.raises(NotExtremal):
        classify_pair(sp4_f3, x, sp4_f3.extremal_generators[0])


@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 4), st.integers(0, 4))
def test_exp_is_a_one_parameter_group(sp4_f5, seed, lam, mu):
    F = sp4_f5.field
    rng = np.random.default_rng(seed)
    s = standard_space(F, 2)
    v = F.random_array(rng, 4)
    if not v.any():
        v[0] = 1
    x = pure_coords(s, v)
    A, B = exp_matrix(sp4_f5, x, lam), exp_matrix(sp4_f5, x, mu)
    assert np.array_equal(F.matmul(A, B), exp_matrix(sp4_f5, x, (lam + mu) % 5))
    assert exp_check(sp4_f5, x, lam)


def test_exp_apply_matches_matrix(sp4_f5):
    F = sp4_f5.field
    T = extremal_form(sp4_f5)
    x, y = sp4_f5.extremal_generators[0], sp4_f5.extremal_generators[2]
    got = exp_apply(sp4_f5, T, x, 2, y)
    want = F.reduce(y + 2 * sp4_f5.bracket(x, y) + 4 * T.g(x, y) * x)
    assert np.array_equal(got, want)


def test_exp_of_sandwich_refused():
    H = heisenberg(FieldSpec.prime(5))
    with pytest.raises(ValueError, match="pure required"):
        exp_matrix(H, H.extremal_generators[0], 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sl2_conic_has_q_plus_one_extremal_points(p):
    F = FieldSpec.prime(p)
    L = sp_algebra(F, 1)
    x, y = L.extremal_generators[0], L.extremal_generators[1]
    pts = sl2_extremal_points(L, x, y)
    assert len(pts) == p + 1
    assert extremal_mask(L, np.array(pts)).all()
    assert len({tuple(projective_normalize(F, u)) for u in pts}) == p + 1


def test_not_hyperbolic(sp4_f3):
    with pytest.raises(ValueError, match="not hyperbolic"):
        sl2_extremal_points(sp4_f3, sp4_f3.extremal_generators[0], sp4_f3.extremal_generators[1])


def test_condition_A_on_sp4(sp4_f3_geom, sp4_f3):
    rep = check_condition_A(sp4_f3, sp4_f3_geom.reps[:15])
    assert rep.passed and rep.details["pair_counts"]["CommutingExtremalLine"] == 0


def test_condition_A_fails_with_sandwich_lines():
    F = FieldSpec.prime(3)
    s = standard_space(F, 1, 2)
    L = sf_algebra(s)
    pts = [pure_coords(s, s.vector(v)) for v in ([0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0])]
    rep = check_condition_A(L, pts)
    assert not rep.passed and rep.witnesses


def test_condition_B_sampled(sp4_f3, sp4_f3_geom):
    T = extremal_form(sp4_f3)
    reps = sp4_f3_geom.reps
    for i, j, k in itertools.combinations(range(0, 40, 4), 3):
        if sp4_f3.is_zero(sp4_f3.bracket(reps[i], reps[j])):
            continue
        res = condition_B_witness(sp4_f3, T, reps[i], reps[j], reps[k])
        assert res.found
        assert sp4_f3.is_zero(sp4_f3.bracket(res.u, reps[k]))


def test_condition_B_quadratic_roots():
    F = FieldSpec.prime(3)
    roots, _ = condition_B_quadratic(F, 1, 0, 1)
    assert [r.where for r in roots] == ["quadratic_extension"] * 2
    assert condition_B_quadratic(F, 0, 0, 1) == ([], "no root")
    roots, _ = condition_B_quadratic(F, 1, 0, 2)
    assert {r.value for r in roots} == {1, 2}


def _points(A):
    F = A.field
    return list({tuple(projective_normalize(F, x)): projective_normalize(F, x) for x in enumerate_extremal(A)}.values())


def test_psp3_violates_condition_A():
    """The degenerate-W algebra has extremal pairs of kinds (b) and (d)."""
    from collections import Counter

    from extremal_sp.tensor_model import psp3_algebra
    A = psp3_algebra(FieldSpec.prime(5)).algebra
    pts = _points(A)
    # 30 pure points plus the 6 sandwich points of the ideal e2 (x) f_w
    assert len(pts) == 36
    assert sum(is_extremal(A, x).sandwich for x in pts) == 6
    kinds = Counter(classify_pair(A, x, y) for x, y in itertools.combinations(pts, 2))
    assert kinds[PairClass.CommutingBracketExtremal] == 150
    assert kinds[PairClass.CommutingExtremalLine] == 105
    assert not check_condition_A(A, pts).passed


def test_psp3_characteristic_three_has_extra_extremal_points():
    from extremal_sp.tensor_model import psp3_algebra
    A = psp3_algebra(FieldSpec.prime(3)).algebra
    pts = _points(A)
    n_sandwich = sum(is_extremal(A, x).sandwich for x in pts)
    assert (len(pts), n_sandwich) == (40, 4)  # 12 pure, 4 sandwich, 24 more since -2 = 1


@pytest.mark.parametrize("p, count", [(3, 13), (5, 31)])
def test_sp3_extremal_points_are_the_pure_points(p, count):
    from extremal_sp.tensor_model import sp3_algebra
    A = sp3_algebra(FieldSpec.prime(p)).algebra
    assert len(_points(A)) == count == p * p + p + 1
