import pytest
from hypothesis import given, strategies as st

from extremal_sp.fields import FieldMismatch, FieldSpec
from extremal_sp.linalg import (EchelonBasis, Mat, Subspace, inverse, kernel, rank, row_reduce, rref, solve,
                                subspace_ops)
from strategies import field_and_matrix, matrices


def _eq(A, B):
    return A.shape == B.shape and all(x == y for x, y in zip(A.flat, B.flat))


@given(field_and_matrix())
def test_rref_is_idempotent(FA):
    F, A = FA
    R, piv = row_reduce(F, A)
    R2, piv2 = row_reduce(F, R)
    assert _eq(R, R2) and piv == piv2


@given(field_and_matrix())
def test_rank_plus_nullity(FA):
    F, A = FA
    assert rank(F, A) + kernel(F, A).dim == A.shape[1]


@given(field_and_matrix())
def test_kernel_vectors_are_killed(FA):
    F, A = FA
    K = kernel(F, A)
    for v in K.basis:
        assert not F.nonzero_mask(F.matmul(A, v)).any()


@given(field_and_matrix(), st.data())
def test_solve_consistent_systems(FA, data):
    F, A = FA
    x0 = data.draw(matrices(F, st.just(A.shape[1]), st.just(1))).reshape(-1)
    b = F.matmul(A, x0)
    x = solve(F, A, b)
    assert x is not None and _eq(F.matmul(A, x), b)


@given(field_and_matrix(max_rows=4, max_cols=4))
def test_inverse_when_square(FA):
    F, A = FA
    if A.shape[0] != A.shape[1]:
        return
    if rank(F, A) < A.shape[0]:
        with pytest.raises(ValueError, match="singular"):
            inverse(F, A)
    else:
        assert _eq(F.matmul(A, inverse(F, A)), F.eye(A.shape[0]))


@given(field_and_matrix(max_rows=4, max_cols=4), st.data())
def test_dimension_formula(FA, data):
    F, A = FA
    n = A.shape[1]
    B = data.draw(matrices(F, st.integers(1, 4), st.just(n)))
    U, W = Subspace.span(F, list(A), n), Subspace.span(F, list(B), n)
    ops = subspace_ops(U, W)
    assert ops["sum"].dim + ops["intersection"].dim == U.dim + W.dim
    assert ops["intersection"].is_subspace_of(U) and ops["intersection"].is_subspace_of(W)
    assert U.is_subspace_of(ops["sum"])


def test_rref_example_over_f5():
    F = FieldSpec.prime(5)
    R, r, K = rref(Mat.of(F, [[1, 2, 3], [2, 4, 2]]))
    assert r == 2 and K.dim == 1
    assert _eq(R.entries, F.array([[1, 2, 0], [0, 0, 1]]))


def test_coords_and_membership():
    F = FieldSpec.rational()
    U = Subspace.span(F, [F.array([1, 1, 0]), F.array([0, 1, 1])], 3)
    v = F.array([2, 5, 3])
    assert U.contains(v)
    c = U.coords(v)
    assert _eq(F.reduce(c @ U.basis), v)
    assert not U.contains(F.array([1, 0, 0]))


def test_field_mismatch():
    U = Subspace.span(FieldSpec.prime(3), [FieldSpec.prime(3).array([1, 0])], 2)
    W = Subspace.span(FieldSpec.prime(5), [FieldSpec.prime(5).array([1, 0])], 2)
    with pytest.raises(FieldMismatch):
        U.sum(W)


@given(field_and_matrix(max_rows=6, max_cols=4))
def test_echelon_basis_matches_rank(FA):
    F, A = FA
    E = EchelonBasis(F, A.shape[1])
    added = sum(E.add(row) for row in A)
    assert added == len(E) == rank(F, A)
    for row in A:
        assert not F.nonzero_mask(E.reduce(row)).any()
    assert E.subspace().equals(Subspace.span(F, list(A), A.shape[1]))
