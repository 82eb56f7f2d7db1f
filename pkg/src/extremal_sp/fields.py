"""Exact scalar fields: prime fields F_p, their quadratic extensions F_{p^2}, and Q.

Scalars are plain Python values so they can live inside numpy arrays:

* F_p      -- ``int`` in ``range(p)``; arrays use ``int64`` (or ``object`` for huge p)
* F_{p^2}  -- :class:`QuadElement` ``a + b*t`` with ``t*t == nonsquare``; ``object`` arrays
* Q        -- :class:`fractions.Fraction`; ``object`` arrays

Every array returned by a :class:`FieldSpec` method is canonical, so structural
equality of arrays is field equality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np
from sympy import isprime
from sympy.ntheory import sqrt_mod


class FieldMismatch(ValueError):
    def __init__(self, detail: str = ""):
        super().__init__("field mismatch" + (f": {detail}" if detail else ""))


class QuadElement:
    """``a + b*t`` in F_p[t]/(t^2 - nonsquare); treated as immutable."""

    __slots__ = ("a", "b", "p", "ns")

    def __init__(self, a: int, b: int, p: int, ns: int):
        self.a, self.b, self.p, self.ns = a, b, p, ns


    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.p != self.p or other.ns != self.ns:
                raise FieldMismatch(f"F_{self.p}^2 vs F_{other.p}^2")
            return other
        if isinstance(other, (int, np.integer)):
            return QuadElement(int(other) % self.p, 0, self.p, self.ns)
        if isinstance(other, Fraction):
            return QuadElement(other.numerator * pow(other.denominator, -1, self.p) % self.p, 0, self.p, self.ns)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElement((self.a + o.a) % self.p, (self.b + o.b) % self.p, self.p, self.ns)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a % self.p, -self.b % self.p, self.p, self.ns)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElement((self.a - o.a) % self.p, (self.b - o.b) % self.p, self.p, self.ns)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        p = self.p
        return QuadElement((self.a * o.a + self.b * o.b * self.ns) % p,
                           (self.a * o.b + self.b * o.a) % p, p, self.ns)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElement":
        norm = (self.a * self.a - self.ns * self.b * self.b) % self.p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        ni = pow(norm, -1, self.p)
        return QuadElement(self.a * ni % self.p, -self.b * ni % self.p, self.p, self.ns)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        result = QuadElement(1, 0, self.p, self.ns)
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return (self.a, self.b, self.p, self.ns) == (other.a, other.b, other.p, other.ns)
        if isinstance(other, (int, np.integer)):
            return self.b == 0 and self.a == int(other) % self.p
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.a, self.b, self.p, self.ns))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}t"


_INT64_LIMIT = 1 << 20


@dataclass(frozen=True)
class FieldSpec:
    """Exact field of characteristic != 2."""

    kind: str  # "prime" | "prime_square" | "rational"
    p: int = 0
    nonsquare: int = 0

    def __post_init__(self):
        if self.kind == "rational":
            return
        if self.kind not in ("prime", "prime_square"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.kind == "prime_square":
            if pow(self.nonsquare % self.p, (self.p - 1) // 2, self.p) != self.p - 1:
                raise ValueError(f"{self.nonsquare} is not a non-residue mod {self.p}")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec("prime", p)

    @staticmethod
    def rational() -> "FieldSpec":
        return FieldSpec("rational")

    @staticmethod
    def prime_square(p: int, nonsquare: int | None = None) -> "FieldSpec":
        if nonsquare is None:
            nonsquare = smallest_nonresidue(p)
        return FieldSpec("prime_square", p, nonsquare % p)

    # -- basic properties ---------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.kind != "rational"

    @property
    def order(self) -> int | None:
        if self.kind == "prime":
            return self.p
        if self.kind == "prime_square":
            return self.p * self.p
        return None

    @property
    def characteristic(self) -> int:
        return self.p if self.is_finite else 0

    @property
    def dtype(self):
        if self.kind == "prime" and self.p < _INT64_LIMIT:
            return np.int64
        return object

    def __str__(self):
        if self.kind == "prime":
            return f"F_{self.p}"
        if self.kind == "prime_square":
            return f"F_{self.p}^2"
        return "Q"

    # -- scalars ------------------------------------------------------------
    def __call__(self, x):
        """Canonical scalar for ``x`` (int, Fraction, 'num/den' string, QuadElement)."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "prime":
            if isinstance(x, QuadElement):
                raise FieldMismatch(f"{x!r} is not in {self}")
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if self.kind == "prime_square":
            if isinstance(x, QuadElement):
                if (x.p, x.ns) != (self.p, self.nonsquare):
                    raise FieldMismatch(f"{x!r} is not in {self}")
                return x
            if isinstance(x, (tuple, list)):
                a, b = x
                return QuadElement(int(a) % self.p, int(b) % self.p, self.p, self.nonsquare)
            return QuadElement(int(self.prime_subfield()(x)), 0, self.p, self.nonsquare)
        if isinstance(x, QuadElement):
            raise FieldMismatch(f"{x!r} is not in Q")
        return Fraction(x)

    def prime_subfield(self) -> "FieldSpec":
        return FieldSpec.prime(self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return self.reduce(-a)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.kind == "prime":
            return pow(int(a), -1, self.p)
        if self.kind == "prime_square":
            return a.inverse()
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        if self.kind == "prime":
            return pow(int(a), e, self.p)
        if self.kind == "prime_square":
            return a ** e
        return Fraction(a) ** e

    def reduce(self, x):
        """Canonicalise a scalar or array produced by raw ``+ - *``."""
        if self.kind == "prime":
            if isinstance(x, np.ndarray):
                return x % self.p
            return int(x) % self.p
        return x

    # -- enumeration / randomness ------------------------------------------
    def elements(self) -> Iterator:
        if self.kind == "prime":
            yield from range(self.p)
        elif self.kind == "prime_square":
            for a in range(self.p):
                for b in range(self.p):
                    yield QuadElement(a, b, self.p, self.nonsquare)
        else:
            raise ValueError("Q is not enumerable")

    def units(self) -> Iterator:
        for x in self.elements():
            if x != 0:
                yield x

    def random(self, rng: np.random.Generator, nonzero: bool = False, height: int = 5):
        while True:
            if self.kind == "prime":
                x = int(rng.integers(0, self.p))
            elif self.kind == "prime_square":
                x = QuadElement(int(rng.integers(0, self.p)), int(rng.integers(0, self.p)), self.p, self.nonsquare)
            else:
                x = Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))
            if not nonzero or x != 0:
                return x

    def random_array(self, rng: np.random.Generator, shape, height: int = 5) -> np.ndarray:
        if self.kind == "prime":
            return rng.integers(0, self.p, size=shape).astype(self.dtype)
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*out.shape):
            out[idx] = self.random(rng, height=height)
        return out

    # -- squares ------------------------------------------------------------
    def is_square(self, a) -> bool:
        if a == 0:
            return True
        if self.kind == "prime":
            return pow(int(a), (self.p - 1) // 2, self.p) == 1
        if self.kind == "prime_square":
            return a ** ((self.p * self.p - 1) // 2) == 1
        a = Fraction(a)
        if a < 0:
            return False
        return _is_int_square(a.numerator) and _is_int_square(a.denominator)

    def sqrt(self, a):
        """A square root of ``a`` in this field, or ``None``."""
        if a == 0:
            return self.zero
        if self.kind == "prime":
            r = sqrt_mod(int(a), self.p)
            return None if r is None else int(r)
        if self.kind == "prime_square":
            if not self.is_square(a):
                return None
            for x in self.elements():
                if x * x == a:
                    return x
            return None
        if not self.is_square(a):
            return None
        a = Fraction(a)
        return Fraction(math.isqrt(a.numerator), math.isqrt(a.denominator))

    # -- arrays -------------------------------------------------------------
    def array(self, data) -> np.ndarray:
        """Canonical numpy array over this field."""
        if isinstance(data, np.ndarray) and data.dtype != object and self.kind == "prime":
            return (data.astype(np.int64) % self.p).astype(self.dtype)
        raw = np.array(data, dtype=object)
        out = np.empty(raw.shape, dtype=object)
        for idx in np.ndindex(*raw.shape):
            out[idx] = self(raw[idx])
        if self.dtype is np.int64:
            return out.astype(np.int64)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is np.int64:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        return self.reduce(a * c)

    def nonzero_mask(self, a: np.ndarray) -> np.ndarray:
        if a.dtype == object:
            return np.vectorize(lambda x: x != 0, otypes=[bool])(a) if a.size else np.zeros(a.shape, bool)
        return a != 0

    def embed_into(self, ext: "FieldSpec", a):
        """Image of a base-field scalar or array in the extension ``ext``."""
        if isinstance(a, np.ndarray):
            return ext.array(np.asarray(a, dtype=object))
        return ext(a)

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        if self.kind == "prime":
            return {"type": "prime", "p": self.p}
        if self.kind == "prime_square":
            return {"type": "prime_square", "p": self.p, "nonsquare": self.nonsquare}
        return {"type": "rational"}

    @staticmethod
    def from_json(obj: dict) -> "FieldSpec":
        kind = obj.get("type")
        if kind == "prime":
            return FieldSpec.prime(int(obj["p"]))
        if kind == "prime_square":
            return FieldSpec("prime_square", int(obj["p"]), int(obj["nonsquare"]))
        if kind == "rational":
            return FieldSpec.rational()
        raise ValueError(f"unknown field type {kind!r}")

    def scalar_to_json(self, x):
        if self.kind == "prime":
            return int(x)
        if self.kind == "prime_square":
            return [x.a, x.b]
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def scalar_from_json(self, obj):
        if self.kind == "prime_square" and isinstance(obj, list):
            return self(tuple(obj))
        return self(obj)

    def array_to_json(self, a: np.ndarray):
        a = np.asarray(a)
        if a.ndim == 0:
            return self.scalar_to_json(a[()])
        if a.ndim == 1:
            return [self.scalar_to_json(x) for x in a]
        return [self.array_to_json(row) for row in a]

    def array_from_json(self, obj) -> np.ndarray:
        if self.kind == "prime_square":
            def conv(o):
                if isinstance(o, list) and len(o) == 2 and not isinstance(o[0], list):
                    return self(tuple(o))
                return [conv(e) for e in o]
            obj = conv(obj)
            raw = np.empty(_shape(obj), dtype=object)
            _fill(raw, obj)
            return raw
        return self.array(obj)


def _shape(obj):
    shape = []
    while isinstance(obj, list):
        shape.append(len(obj))
        obj = obj[0] if obj else None
    return tuple(shape)


def _fill(out, obj, idx=()):
    if isinstance(obj, list):
        for i, o in enumerate(obj):
            _fill(out, o, idx + (i,))
    else:
        out[idx] = obj


def _is_int_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod the odd prime ``p`` (Euler's criterion)."""
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise ValueError(f"no non-residue mod {p}")


def quadratic_extension(f: FieldSpec) -> FieldSpec:
    if f.kind != "prime":
        raise ValueError("unsupported extension")
    return FieldSpec.prime_square(f.p)


@dataclass(frozen=True)
class Root:
    value: object
    field: FieldSpec
    where: str  # "base_field" | "quadratic_extension"


class NoRootError(ValueError):
    pass


def solve_quadratic(F: FieldSpec, a, b, c) -> tuple[list[Root], str | None]:
    """Roots of ``a*x^2 + b*x + c``.

    Returns ``(roots, note)``. ``note`` is ``"irrational discriminant"`` over Q when
    the roots are not rational, otherwise ``None``. Roots are listed with
    multiplicity collapsed. When the discriminant is a non-square in a prime field
    the two conjugate roots in F_{p^2} are returned.
    """
    a, b, c = F(a), F(b), F(c)
    if a == 0:
        if b == 0:
            if c == 0:
                raise ValueError("zero polynomial")
            raise NoRootError("no root")
        return [Root(F.div(F.neg(c), b), F, "base_field")], None
    disc = F.sub(F.mul(b, b), F.mul(4, F.mul(a, c)))
    two_a_inv = F.inv(F.mul(2, a))
    r = F.sqrt(disc)
    if r is not None:
        vals = [F.mul(F.add(F.neg(b), r), two_a_inv), F.mul(F.sub(F.neg(b), r), two_a_inv)]
        out = []
        for v in vals:
            if v not in [o.value for o in out]:
                out.append(Root(v, F, "base_field"))
        return out, None
    if F.kind == "prime":
        E = quadratic_extension(F)
        # disc = ns * s^2 for some s in F_p, so sqrt(disc) = s*t
        s = F.sqrt(F.div(disc, E.nonsquare))
        sq = QuadElement(0, int(s), F.p, E.nonsquare)
        mb, tai = E(F.neg(b)), E(two_a_inv)
        return [Root((mb + sq) * tai, E, "quadratic_extension"),
                Root((mb - sq) * tai, E, "quadratic_extension")], None
    if F.kind == "rational":
        return [], "irrational discriminant"
    raise ValueError("unsupported extension")
