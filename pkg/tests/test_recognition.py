import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extremal_sp.algebra import StructureLieAlgebra, base_change_quadratic, transport
from extremal_sp.fields import FieldSpec
from extremal_sp.linalg import inverse, rank
from extremal_sp.recognition import (HypothesisFailure, NotProportional, nonsplit_check, product_gamma, recognize,
                                    scramble)
from extremal_sp.symplectic import standard_space
from extremal_sp.tensor_model import psp3_algebra, sf_algebra, sp3_algebra, sp_algebra


def assert_isomorphism(L, rep):
    """Independent re-check: u -> u @ psi is a bijective bracket-preserving map onto the model."""
    F = L.field
    model = sf_algebra(standard_space(F, rep.m))
    psi = rep.psi
    assert rank(F, psi) == L.dim == model.dim
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            a, b = L.basis_vector(i), L.basis_vector(j)
            lhs = model.bracket(F.matmul(a, psi), F.matmul(b, psi))
            rhs = F.matmul(L.bracket(a, b), psi)
            assert all(x == y for x, y in zip(lhs, rhs))
    assert rep.space.is_nondegenerate and rep.space.n == 2 * rep.m


@pytest.mark.parametrize("F", [FieldSpec.prime(3), FieldSpec.prime(5), FieldSpec.prime(7), FieldSpec.rational(),
                               FieldSpec.prime_square(3)])
def test_sl2_recognized(F):
    L = sp_algebra(F, 1)
    rep = recognize(L)
    assert rep.passed and rep.m == 1
    assert_isomorphism(L, rep)
    assert ("automorphism assumed trivial" in rep.notes) == (F.kind == "prime_square")


def test_sl2_after_base_change():
    L = base_change_quadratic(sp_algebra(FieldSpec.prime(5), 1))
    assert recognize(L).passed


def test_sp4_f3(sp4_f3, sp4_f3_geom):
    rep = recognize(sp4_f3, geom=sp4_f3_geom)
    assert rep.passed and rep.m == 2 and rep.gamma in (1, 2)
    assert_isomorphism(sp4_f3, rep)
    j = rep.to_json()
    assert set(j) == {"m", "gram", "gamma", "psi", "checks", "notes"}


@settings(max_examples=8)
@given(st.integers(0, 2 ** 32 - 1))
def test_scrambled_sp4_f3(sp4_f3, seed):
    rng = np.random.default_rng(seed)
    L2, T, s = scramble(sp4_f3, rng)
    rep = recognize(L2)
    assert rep.passed and rep.m == 2
    assert_isomorphism(L2, rep)
    F = sp4_f3.field
    assert product_gamma(F, sp4_f3.C, transport(L2, inverse(F, T)).C).gamma == s


def test_scrambled_sp4_f5():
    L = sp_algebra(FieldSpec.prime(5), 2)
    L2, _, _ = scramble(L, np.random.default_rng(7), scale=3)
    rep = recognize(L2)
    assert rep.passed
    assert_isomorphism(L2, rep)


def test_sp6_f3(sp6_f3):
    rep = recognize(sp6_f3)
    assert rep.passed and rep.m == 3
    assert_isomorphism(sp6_f3, rep)


def test_sp3_fails_with_degenerate_form():
    with pytest.raises(HypothesisFailure, match="degenerate"):
        recognize(sp3_algebra(FieldSpec.prime(3)).algebra)


def test_missing_generators():
    L = sp_algebra(FieldSpec.prime(3), 1)
    with pytest.raises(HypothesisFailure, match="no extremal generators"):
        recognize(L.with_generators([]))


def test_generators_spanning_a_subalgebra(sp4_f3):
    L = sp4_f3.with_generators([sp4_f3.extremal_generators[0], sp4_f3.extremal_generators[2]])
    with pytest.raises(HypothesisFailure, match="span only 3"):
        recognize(L)


def test_direct_sum_is_disconnected():
    F = FieldSpec.prime(3)
    a = sp_algebra(F, 1)
    C = F.zeros((6, 6, 6))
    C[:3, :3, :3] = a.C
    C[3:, 3:, 3:] = a.C
    gens = []
    for g in a.extremal_generators:
        gens += [np.concatenate([g, F.zeros(3)]), np.concatenate([F.zeros(3), g])]
    with pytest.raises(HypothesisFailure, match="not connected"):
        recognize(StructureLieAlgebra(F, C, tuple(gens)))


def test_rational_sp4_exceeds_budget():
    with pytest.raises(HypothesisFailure, match="budget"):
        recognize(sp_algebra(FieldSpec.rational(), 2), budget=300)


@pytest.mark.parametrize("gamma", [2, 3, 4])
def test_product_gamma_recovers_scalar(gamma):
    F = FieldSpec.prime(5)
    L = sp_algebra(F, 2)
    res = product_gamma(F, L.C, F.reduce(L.C * gamma))
    assert res.gamma == gamma and res.verified


def test_product_gamma_negative_controls(sp4_f3):
    F = sp4_f3.field
    C2 = sp4_f3.C.copy()
    i, j, k = map(int, np.argwhere(C2 != 0)[0])
    C2[i, j, k] = (C2[i, j, k] + 1) % 3
    C2[j, i, k] = (-C2[i, j, k]) % 3
    with pytest.raises(NotProportional, match="not proportional"):
        product_gamma(F, sp4_f3.C, C2)
    with pytest.raises(NotProportional):
        product_gamma(F, sp4_f3.C, F.zeros(sp4_f3.C.shape))


@pytest.mark.parametrize("F", [FieldSpec.prime(3), FieldSpec.prime(5), FieldSpec.rational()], ids=str)
def test_radical_ideal_is_a_nonsplit_heisenberg_extension(F):
    r = nonsplit_check(sp3_algebra(F).algebra)
    assert r == {"dim_N": 3, "dim_center_N": 1, "quotient_dim": 3, "L_splits_over_N": True, "N_nonsplit": True}


def test_nonsplit_check_without_center():
    r = nonsplit_check(psp3_algebra(FieldSpec.prime(5)).algebra)
    assert r["dim_N"] == 2 and r["dim_center_N"] == 2 and r["L_splits_over_N"] and not r["N_nonsplit"]


def test_nonsplit_check_needs_a_radical(sp4_f3):
    with pytest.raises(HypothesisFailure):
        nonsplit_check(sp4_f3)
