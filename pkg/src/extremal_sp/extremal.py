"""Extremal elements: detection, pair classes, exponentials, conics, and the (A)/(B) checks."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .algebra import ExtremalFormTable, NotExtremal, StructureLieAlgebra, extremal_row, from_bracket_closure
from .fields import FieldSpec, NoRootError, Root, solve_quadratic
from .linalg import rank


@dataclass(frozen=True)
class ExtremalStatus:
    extremal: bool
    sandwich: bool

    @property
    def pure(self) -> bool:
        return self.extremal and not self.sandwich


def _nonzero_or_raise(L: StructureLieAlgebra, x):
    x = L.element(x)
    if L.is_zero(x):
        raise ValueError("zero element")
    return x


def is_extremal(L: StructureLieAlgebra, x) -> ExtremalStatus:
    x = _nonzero_or_raise(L, x)
    try:
        row = extremal_row(L, x)
    except NotExtremal:
        return ExtremalStatus(False, False)
    return ExtremalStatus(True, not L.field.nonzero_mask(row).any())


def projective_normalize(F: FieldSpec, x: np.ndarray) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1."""
    nz = np.flatnonzero(F.nonzero_mask(x))
    if nz.size == 0:
        raise ValueError("zero vector has no projective point")
    return F.reduce(x * F.inv(x[int(nz[0])]))


def extremal_mask(L: StructureLieAlgebra, X: np.ndarray) -> np.ndarray:
    """Vectorised extremality test for the (nonzero) rows of ``X``."""
    F = L.field
    X = np.asarray(X)
    if X.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    A = L.ad_batch(X)
    A2 = F.reduce(A @ A)
    nzmask = F.nonzero_mask(X)
    i0 = nzmask.argmax(axis=1)
    rows = np.arange(X.shape[0])
    if F.dtype is np.int64:
        p = F.p
        inv_table = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
        xinv = inv_table[X[rows, i0]]
        c = (A2[rows, i0, :] * xinv[:, None]) % p
        diff = (A2 - X[:, :, None] * c[:, None, :]) % p
        return ~diff.any(axis=(1, 2))
    out = np.zeros(X.shape[0], dtype=bool)
    for k in rows:
        c = F.reduce(A2[k, i0[k]] * F.inv(X[k, i0[k]]))
        out[k] = not F.nonzero_mask(F.reduce(A2[k] - np.outer(X[k], c))).any()
    return out


def enumerate_extremal(L: StructureLieAlgebra, batch: int = 8192) -> np.ndarray:
    """Every nonzero extremal element of a small algebra over F_p (brute force)."""
    F, d = L.field, L.dim
    if F.kind != "prime" or F.dtype is not np.int64:
        raise ValueError("brute force needs a small prime field")
    p = F.p
    total = p ** d
    weights = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    found = []
    for start in range(1, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        X = (idx[:, None] // weights[None, :]) % p
        found.append(X[extremal_mask(L, X)])
    return np.concatenate(found) if found else F.zeros((0, d))


# -- pair classification -------------------------------------------------------

class PairClass(enum.Enum):
    SamePoint = "a"
    CommutingExtremalLine = "b"
    CommutingRigid = "c"
    CommutingBracketExtremal = "d"
    Sl2 = "e"


@dataclass(frozen=True)
class PairReport:
    kind: PairClass
    sampled: bool = False


RATIONAL_SAMPLE = (1, -1, 2, 3)


def classify_pair_report(L: StructureLieAlgebra, x, y) -> PairReport:
    F = L.field
    x, y = _nonzero_or_raise(L, x), _nonzero_or_raise(L, y)
    for v in (x, y):
        if not is_extremal(L, v).extremal:
            raise NotExtremal("classify_pair needs extremal inputs")
    if rank(F, np.array([x, y])) == 1:
        return PairReport(PairClass.SamePoint)
    xy = L.bracket(x, y)
    if L.is_zero(xy):
        if F.is_finite:
            ratios, sampled = list(F.units()), False
        else:
            ratios, sampled = [F(r) for r in RATIONAL_SAMPLE], True
        combos = np.array([F.reduce(x + r * y) for r in ratios])
        ext = extremal_mask(L, combos)
        if ext.all():
            return PairReport(PairClass.CommutingExtremalLine, sampled)
        if not ext.any():
            return PairReport(PairClass.CommutingRigid, sampled)
        raise ArithmeticError("some but not all combinations of a commuting pair are extremal")
    gxy = F.reduce(extremal_row(L, x) @ y)
    if gxy != 0:
        sub, _ = from_bracket_closure(F, L.bracket, [x, y], cap=3)
        if sub.dim != 3:
            raise ArithmeticError("noncommuting pair with g != 0 does not span sl2")
        return PairReport(PairClass.Sl2)
    if not is_extremal(L, xy).extremal:
        raise ArithmeticError("[x,y] is not extremal although g(x,y) = 0")
    return PairReport(PairClass.CommutingBracketExtremal)


def classify_pair(L: StructureLieAlgebra, x, y) -> PairClass:
    return classify_pair_report(L, x, y).kind


# -- exponentials ---------------------------------------------------------------

def exp_matrix(L: StructureLieAlgebra, x, lam, g_row: np.ndarray | None = None) -> np.ndarray:
    """Matrix of ``y -> y + lam [x,y] + lam^2 g(x,y) x``."""
    F = L.field
    x = L.element(x)
    if g_row is None:
        g_row = extremal_row(L, x)
    if not F.nonzero_mask(g_row).any():
        raise ValueError("pure required")
    lam = F(lam)
    return F.reduce(F.eye(L.dim) + L.ad(x) * lam + np.outer(x, g_row) * F.mul(lam, lam))


def exp_apply(L: StructureLieAlgebra, table: ExtremalFormTable | None, x, lam, y) -> np.ndarray:
    F = L.field
    row = table.g_row(L.element(x)) if table is not None else None
    return F.matmul(exp_matrix(L, x, lam, row), L.element(y))


def is_automorphism(L: StructureLieAlgebra, E: np.ndarray) -> bool:
    """``E [b_i, b_j] == [E b_i, E b_j]`` for all basis pairs."""
    F, C = L.field, L.C
    lhs = F.reduce(np.einsum("km,ijm->ijk", E, C))
    rhs = F.reduce(np.einsum("ai,bj,abk->ijk", E, E, C))
    return not F.nonzero_mask(F.reduce(lhs - rhs)).any()


def exp_check(L: StructureLieAlgebra, x, lam) -> bool:
    return is_automorphism(L, exp_matrix(L, x, lam))


# -- conic points -------------------------------------------------------------

def conic_point(L: StructureLieAlgebra, x, y, gxy, lam) -> np.ndarray:
    F = L.field
    lam = F(lam)
    return F.reduce(x * gxy + y * F.mul(lam, lam) + L.bracket(x, y) * lam)


DEFAULT_RATIONAL_PARAMS = (0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3)


def sl2_extremal_points(L: StructureLieAlgebra, x, y, table: ExtremalFormTable | None = None,
                        params=None) -> list[np.ndarray]:
    """Extremal points of ``<x, y>``: ``g(x,y) x + lam^2 y + lam [x,y]`` and ``<y>``.

    Over a finite field all ``q + 1`` points are returned. Over Q the
    parametrisation is evaluated at ``params``.
    """
    F = L.field
    x, y = L.element(x), L.element(y)
    gxy = table.g(x, y) if table is not None else F.reduce(extremal_row(L, x) @ y)
    if gxy == 0:
        raise ValueError("not hyperbolic")
    if params is None:
        params = list(F.elements()) if F.is_finite else [F(t) for t in DEFAULT_RATIONAL_PARAMS]
    xy = L.bracket(x, y)
    pts = [F.reduce(x * gxy + y * F.mul(F(t), F(t)) + xy * F(t)) for t in params]
    pts.append(y)
    return pts


# -- hypotheses (A) and (B) ---------------------------------------------------------

@dataclass
class CheckReport:
    check: str
    passed: bool
    witnesses: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    def to_json(self, F: FieldSpec | None = None) -> dict:
        def conv(w):
            if isinstance(w, np.ndarray) and F is not None:
                return F.array_to_json(w)
            if isinstance(w, (list, tuple)):
                return [conv(v) for v in w]
            if isinstance(w, enum.Enum):
                return w.name
            return w
        return {"check": self.check, "pass": self.passed, "witnesses": [conv(w) for w in self.witnesses],
                **({"details": self.details} if self.details else {})}


def check_condition_A(L: StructureLieAlgebra, points, max_witnesses: int = 5) -> CheckReport:
    """Every pair of extremal points commutes rigidly, coincides, or spans sl2."""
    counts = {c.name: 0 for c in PairClass}
    witnesses = []
    sampled = False
    for i, j in itertools.combinations(range(len(points)), 2):
        rep = classify_pair_report(L, points[i], points[j])
        counts[rep.kind.name] += 1
        sampled |= rep.sampled
        if rep.kind in (PairClass.CommutingExtremalLine, PairClass.CommutingBracketExtremal):
            if len(witnesses) < max_witnesses:
                witnesses.append((i, j, rep.kind))
    bad = counts["CommutingExtremalLine"] + counts["CommutingBracketExtremal"]
    return CheckReport("condition_A", bad == 0, witnesses, {"pair_counts": counts, "sampled": sampled})


@dataclass
class ConditionBResult:
    found: bool
    u: np.ndarray | None = None
    lam: object = None
    roots: list = dc_field(default_factory=list)  # Root values, possibly in F_{p^2}
    note: str | None = None


def condition_B_quadratic(F: FieldSpec, a, b, c):
    """Roots of ``a lam^2 + b lam + c``; ``([], 'no root')`` when a = b = 0 != c."""
    try:
        return solve_quadratic(F, a, b, c)
    except NoRootError:
        return [], "no root"


def condition_B_witness(L: StructureLieAlgebra, table: ExtremalFormTable, x, y, z) -> ConditionBResult:
    """An extremal ``u`` in ``<x,y>`` commuting with ``z``, or the extension roots."""
    F = L.field
    x, y, z = L.element(x), L.element(y), L.element(z)
    xy = L.bracket(x, y)
    if L.is_zero(xy):
        raise ValueError("[x,y] must be nonzero")
    for cand in (x, y):
        if L.is_zero(L.bracket(z, cand)):
            return ConditionBResult(True, cand, note="trivial")
    a = table.g(z, y)
    b = table.g(z, xy)
    c = F.mul(table.g(x, y), table.g(z, x))
    if a == 0 and b == 0 and c == 0:
        # every u_lam is g-orthogonal to z; look for an actual commuting one
        cands = [F(t) for t in (F.elements() if F.is_finite else DEFAULT_RATIONAL_PARAMS)]
        roots, note = [Root(t, F, "base_field") for t in cands], "degenerate quadratic"
    else:
        roots, note = condition_B_quadratic(F, a, b, c)
    gxy = table.g(x, y)
    base = [r for r in roots if r.where == "base_field"]
    for r in base:
        u = conic_point(L, x, y, gxy, r.value)
        if not L.is_zero(u) and L.is_zero(L.bracket(z, u)) and is_extremal(L, u).extremal:
            return ConditionBResult(True, u, r.value, roots, note)
    return ConditionBResult(False, None, None, roots, note or ("extension roots" if roots else "no root"))
