"""Hypothesis strategies over the supported fields."""
from hypothesis import strategies as st

from extremal_sp.fields import FieldSpec

SMALL_PRIMES = (3, 5, 7, 11, 13)

prime_fields = st.sampled_from(SMALL_PRIMES).map(FieldSpec.prime)
square_fields = st.sampled_from((3, 5, 7)).map(FieldSpec.prime_square)
rational = st.just(FieldSpec.rational())
fields = st.one_of(prime_fields, square_fields, rational)


def scalars(F: FieldSpec, nonzero: bool = False):
    if F.kind == "prime":
        base = st.integers(0, F.p - 1)
    elif F.kind == "prime_square":
        base = st.tuples(st.integers(0, F.p - 1), st.integers(0, F.p - 1))
    else:
        base = st.fractions(min_value=-20, max_value=20, max_denominator=9)
    s = base.map(F)
    return s.filter(lambda x: x != 0) if nonzero else s


@st.composite
def field_and_scalars(draw, n: int, fields=fields, nonzero=False):
    F = draw(fields)
    return F, [draw(scalars(F, nonzero)) for _ in range(n)]


@st.composite
def matrices(draw, F: FieldSpec, rows, cols):
    r, c = draw(rows), draw(cols)
    vals = [[draw(scalars(F)) for _ in range(c)] for _ in range(r)]
    return F.array(vals) if r and c else F.zeros((r, c))


@st.composite
def field_and_matrix(draw, fields=fields, max_rows=5, max_cols=5):
    F = draw(fields)
    A = draw(matrices(F, st.integers(1, max_rows), st.integers(1, max_cols)))
    return F, A
