import numpy as np
import pytest
from hypothesis import given, strategies as st

from extremal_sp.fields import FieldSpec
from extremal_sp.symplectic import f_eval, standard_space
from extremal_sp.tensor_model import (SfElement, SpaceMismatch, act, bracket_model, example_triple_vectors,
                                      from_coords, model_extremal_form, pure, sf_coords, sf_dim,
                                      sp_identification, sym_pair)
from strategies import scalars

small_spaces = st.tuples(st.sampled_from([FieldSpec.prime(3), FieldSpec.prime(5), FieldSpec.rational()]),
                         st.integers(1, 3)).map(lambda t: standard_space(t[0], t[1]))


def vec(draw, s, nonzero=True):
    v = s.vector([draw(scalars(s.field)) for _ in range(s.n)])
    if nonzero and not s.field.nonzero_mask(v).any():
        v[0] = s.field.one
    return v


@pytest.mark.parametrize("p,m,dim", [(3, 2, 10), (5, 2, 10), (3, 3, 21), (7, 1, 3)])
def test_identification(p, m, dim):
    r = sp_identification(standard_space(FieldSpec.prime(p), m))
    assert r == {"dim_sf": dim, "dim_sp": dim, "injective": True, "inside": True, "equal": True}
    assert sf_dim(2 * m) == dim


def test_identification_needs_nondegenerate():
    with pytest.raises(ValueError, match="degenerate form"):
        sp_identification(standard_space(FieldSpec.prime(3), 1, 1))


@given(small_spaces, st.data())
def test_pure_acts_as_rank_one_map(s, data):
    v, w = vec(data.draw, s), vec(data.draw, s, nonzero=False)
    F = s.field
    got = act(pure(s, v), w)
    want = F.reduce(v * f_eval(s, v, w))
    assert np.array_equal(got, want)


@given(small_spaces, st.data())
def test_trace_form_on_pures_is_f_squared(s, data):
    v, w = vec(data.draw, s), vec(data.draw, s)
    F = s.field
    assert model_extremal_form(pure(s, v), pure(s, w)) == F.mul(f_eval(s, v, w), f_eval(s, v, w))


@given(small_spaces, st.data())
def test_bracket_matches_commutator_of_endomorphisms(s, data):
    F = s.field
    a, b = sym_pair(s, vec(data.draw, s), vec(data.draw, s)), pure(s, vec(data.draw, s))
    c = bracket_model(a, b)
    A, B = a.endomorphism, b.endomorphism
    assert np.array_equal(c.endomorphism, F.reduce(F.matmul(A, B) - F.matmul(B, A)))


@given(small_spaces, st.data())
def test_pure_bracket_formula(s, data):
    """[pure v, pure w] = f(v,w) (v w^T + w v^T)."""
    v, w = vec(data.draw, s), vec(data.draw, s)
    assert bracket_model(pure(s, v), pure(s, w)) == sym_pair(s, v, w).scale(f_eval(s, v, w))


def test_coords_round_trip():
    F = FieldSpec.prime(5)
    s = standard_space(F, 2)
    S = sym_pair(s, s.vector([1, 2, 3, 4]), s.vector([0, 1, 0, 2])).S
    assert np.array_equal(from_coords(F, sf_coords(S), 4), S)


def test_element_validation():
    F = FieldSpec.prime(3)
    s, t = standard_space(F, 1), standard_space(F, 2)
    with pytest.raises(ValueError, match="zero vector"):
        pure(s, [0, 0])
    with pytest.raises(ValueError, match="not symmetric"):
        SfElement(s, F.array([[0, 1], [0, 0]]))
    with pytest.raises(SpaceMismatch):
        pure(s, [1, 0]) + pure(t, [1, 0, 0, 0])


def test_example_triple_vectors():
    e1, e3, z = example_triple_vectors(FieldSpec.prime(5))
    assert list(z) == [1, 4, 0]


def test_element_json_round_trip():
    s = standard_space(FieldSpec.rational(), 1)
    a = pure(s, [1, 2])
    assert SfElement.from_json(a.to_json()) == a
