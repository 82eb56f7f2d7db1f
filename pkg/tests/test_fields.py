from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from extremal_sp.fields import (FieldMismatch, FieldSpec, NoRootError, QuadElement, quadratic_extension,
                                smallest_nonresidue, solve_quadratic)
from strategies import field_and_scalars, fields, prime_fields


@pytest.mark.parametrize("p,expected", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (17, 3), (23, 5)])
def test_smallest_nonresidue(p, expected):
    assert smallest_nonresidue(p) == expected


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3])
def test_prime_field_rejects_non_odd_primes(bad):
    with pytest.raises(ValueError):
        FieldSpec.prime(bad)


def test_prime_square_rejects_residue():
    with pytest.raises(ValueError, match="non-residue"):
        FieldSpec("prime_square", 5, 4)


def test_orders_and_characteristic():
    assert FieldSpec.prime(7).order == 7
    assert FieldSpec.prime_square(3).order == 9
    assert FieldSpec.rational().order is None
    assert FieldSpec.rational().characteristic == 0
    assert len(list(FieldSpec.prime_square(3).units())) == 8


def test_canonical_scalars():
    F = FieldSpec.prime(5)
    assert F(-1) == 4
    assert F(Fraction(1, 2)) == 3
    assert F("3/4") == 2
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 5))
    with pytest.raises(FieldMismatch):
        F(FieldSpec.prime_square(5)((1, 1)))


def test_quad_element_mixing_fields_fails():
    a = FieldSpec.prime_square(3)((1, 1))
    b = FieldSpec.prime_square(5)((1, 1))
    with pytest.raises(FieldMismatch):
        a + b


@given(field_and_scalars(3))
def test_ring_axioms(fs):
    F, (a, b, c) = fs
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0


@given(field_and_scalars(1, nonzero=True))
def test_inverse(fs):
    F, (a,) = fs
    assert F.mul(a, F.inv(a)) == 1
    assert F.div(a, a) == 1


@given(field_and_scalars(1))
def test_square_roots(fs):
    F, (a,) = fs
    sq = F.mul(a, a)
    assert F.is_square(sq)
    r = F.sqrt(sq)
    assert r is not None and F.mul(r, r) == sq


@given(prime_fields)
def test_exactly_half_the_units_are_squares(F):
    assert sum(F.is_square(u) for u in F.units()) == (F.p - 1) // 2


@given(field_and_scalars(3))
def test_quadratic_roots_are_roots(fs):
    F, (a, b, c) = fs
    if a == 0 and b == 0:
        return
    if F.kind == "prime_square" and a != 0 and not F.is_square(F.sub(F.mul(b, b), F.mul(4, F.mul(a, c)))):
        with pytest.raises(ValueError, match="unsupported extension"):
            solve_quadratic(F, a, b, c)
        return
    roots, note = solve_quadratic(F, a, b, c)
    for r in roots:
        E = r.field
        x = r.value
        lhs = E(a) * x * x + E(b) * x + E(c) if E != F else F.add(F.mul(a, F.mul(x, x)), F.add(F.mul(b, x), c))
        assert E.reduce(lhs) == 0
    if F.kind == "prime" and a != 0:
        assert roots  # every quadratic splits over F_{p^2}
    if note == "irrational discriminant":
        assert F.kind == "rational" and not roots


def test_quadratic_extension_roots():
    F = FieldSpec.prime(3)
    roots, _ = solve_quadratic(F, 1, 0, 1)  # x^2 + 1, -1 is a non-residue mod 3
    assert {r.where for r in roots} == {"quadratic_extension"}
    assert len(roots) == 2


def test_quadratic_edge_cases():
    F = FieldSpec.prime(5)
    with pytest.raises(NoRootError, match="no root"):
        solve_quadratic(F, 0, 0, 1)
    (r,), _ = solve_quadratic(F, 0, 2, 1)
    assert F.add(F.mul(2, r.value), 1) == 0
    (r,), _ = solve_quadratic(F, 1, 2, 1)  # double root -1
    assert r.value == 4
    assert solve_quadratic(FieldSpec.rational(), 1, 0, -2) == ([], "irrational discriminant")
    with pytest.raises(ValueError, match="unsupported extension"):
        quadratic_extension(FieldSpec.rational())


@given(fields, st.integers(0, 2 ** 31 - 1))
def test_array_json_round_trip(F, seed):
    A = F.random_array(np.random.default_rng(seed), (2, 3))
    G = FieldSpec.from_json(F.to_json())
    assert G == F
    B = G.array_from_json(F.array_to_json(A))
    assert B.shape == A.shape and all(x == y for x, y in zip(A.flat, B.flat))


def test_large_prime_uses_object_dtype():
    F = FieldSpec.prime(2 ** 31 - 1)
    assert F.dtype is object
    A = F.array([[2 ** 30, 2 ** 30]])
    assert F.matmul(A, A.T)[0, 0] == (2 * 2 ** 60) % (2 ** 31 - 1)


def test_quad_element_power_and_inverse():
    F = FieldSpec.prime_square(3)
    for u in F.units():
        assert u ** 8 == 1
        assert u * u.inverse() == 1
    assert isinstance(F(2), QuadElement)
