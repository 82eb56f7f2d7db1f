import numpy as np
import pytest
from hypothesis import given, strategies as st

from extremal_sp.fields import FieldSpec
from extremal_sp.linalg import Subspace, rank
from extremal_sp.symplectic import SymplecticSpace, f_eval, radical, restrict, standard_space, witt_basis
from strategies import fields, scalars


@st.composite
def spaces(draw):
    F = draw(fields.filter(lambda F: F.kind != "prime_square"))
    n = draw(st.integers(1, 5))
    G = F.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            x = draw(scalars(F))
            G[i, j] = x
            G[j, i] = F.neg(x)
    return SymplecticSpace(F, G)


def test_standard_space_layout():
    F = FieldSpec.prime(3)
    s = standard_space(F, 2)
    assert f_eval(s, s.basis_vector(0), s.basis_vector(2)) == 1
    assert f_eval(s, s.basis_vector(1), s.basis_vector(3)) == 1
    assert f_eval(s, s.basis_vector(0), s.basis_vector(1)) == 0
    assert s.is_nondegenerate
    d = standard_space(F, 1, 2)
    assert d.n == 4 and radical(d).dim == 2


@pytest.mark.parametrize("G", [[[0, 1], [1, 0]], [[1, 0], [0, 0]]])
def test_rejects_non_alternating(G):
    with pytest.raises(ValueError):
        SymplecticSpace(FieldSpec.prime(5), FieldSpec.prime(5).array(G))


@given(spaces())
def test_witt_basis_invariants(s):
    F = s.field
    W = witt_basis(s)
    assert 2 * W.m == s.rank
    assert len(W.radical_basis) == s.n - s.rank
    vecs = W.vectors()
    assert rank(F, np.array(vecs)) == s.n
    m = W.m
    for a in range(len(vecs)):
        for b in range(len(vecs)):
            want = 1 if (a < m and b == a + m) else (-1 if (m <= a < 2 * m and b == a - m) else 0)
            assert f_eval(s, vecs[a], vecs[b]) == F(want)


@given(spaces())
def test_radical_is_orthogonal_to_everything(s):
    R = radical(s)
    for r in R.basis:
        for i in range(s.n):
            assert f_eval(s, r, s.basis_vector(i)) == 0


@given(spaces(), st.data())
def test_form_is_alternating(s, data):
    v = s.vector([data.draw(scalars(s.field)) for _ in range(s.n)])
    assert f_eval(s, v, v) == 0


def test_restriction_of_nondegenerate_subspace():
    F = FieldSpec.prime(3)
    s = standard_space(F, 3)
    U = Subspace.span(F, [s.basis_vector(i) for i in (0, 1, 3, 4)], 6)
    r = restrict(s, U)
    assert r.n == 4 and r.is_nondegenerate
    iso = Subspace.span(F, [s.basis_vector(0), s.basis_vector(1)], 6)
    assert restrict(s, iso).rank == 0


def test_space_json_round_trip():
    s = standard_space(FieldSpec.rational(), 2, 1)
    t = SymplecticSpace.from_json(s.to_json())
    assert t.field == s.field and np.array_equal(t.gram, s.gram)
