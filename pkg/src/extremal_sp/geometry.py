"""The sl2-geometry of an algebra: extremal points, hyperbolic and polar lines, planes."""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (ExtremalFormTable, NotExtremal, StructureLieAlgebra, center, extremal_row,
                      from_bracket_closure)
from .extremal import enumerate_extremal, projective_normalize
from .fields import FieldSpec
from .linalg import Subspace, kernel, rank


class LineKind(enum.Enum):
    Hyperbolic = "hyperbolic"
    Polar = "polar"


@dataclass(frozen=True)
class ExtremalPoint:
    index: int
    rep: np.ndarray


@dataclass(frozen=True)
class GeomLine:
    kind: LineKind
    points: tuple[int, ...]


def _normalize_rows(F: FieldSpec, X: np.ndarray) -> np.ndarray:
    if F.dtype is np.int64:
        p = F.p
        i0 = (X != 0).argmax(axis=1)
        piv = X[np.arange(len(X)), i0]
        inv = np.array([pow(int(a), -1, p) for a in piv], dtype=np.int64)
        return (X * inv[:, None]) % p
    return np.array([projective_normalize(F, x) for x in X], dtype=object).reshape(X.shape)


def _key(v: np.ndarray):
    return v.tobytes() if v.dtype != object else tuple(v)


@dataclass(eq=False)
class Geometry:
    L: StructureLieAlgebra
    reps: list = dc_field(default_factory=list)
    grows: list = dc_field(default_factory=list)       # g(x_p, .) as a row
    hyperbolic: list = dc_field(default_factory=list)  # tuples of point indices
    line_of_pair: dict = dc_field(default_factory=dict)
    partial: bool = False
    skipped_pairs: int = 0  # noncommuting pairs with g = 0 (no sl2)
    _index: dict = dc_field(default_factory=dict)
    _comm: np.ndarray | None = None

    # -- points ------------------------------------------------------------
    @property
    def n_points(self) -> int:
        return len(self.reps)

    @property
    def field(self) -> FieldSpec:
        return self.L.field

    def points(self) -> list[ExtremalPoint]:
        return [ExtremalPoint(i, r) for i, r in enumerate(self.reps)]

    def index_of(self, v: np.ndarray) -> int | None:
        return self._index.get(_key(projective_normalize(self.field, self.L.element(v))))

    def _add(self, v: np.ndarray) -> tuple[int, bool]:
        k = _key(v)
        if k in self._index:
            return self._index[k], False
        self._index[k] = len(self.reps)
        self.reps.append(v)
        self.grows.append(extremal_row(self.L, v))
        self._comm = None
        return len(self.reps) - 1, True

    def rep_matrix(self) -> np.ndarray:
        return np.array(self.reps, dtype=self.reps[0].dtype) if self.reps else self.field.zeros((0, self.L.dim))

    def g(self, i: int, j: int):
        F = self.field
        return F.reduce(self.grows[i] @ self.reps[j])

    def is_sandwich(self, i: int) -> bool:
        return not self.field.nonzero_mask(self.grows[i]).any()

    @property
    def spans(self) -> bool:
        return self.span_dim == self.L.dim

    @property
    def span_dim(self) -> int:
        return rank(self.field, self.rep_matrix()) if self.reps else 0

    # -- commuting relation --------------------------------------------------
    @property
    def commuting(self) -> np.ndarray:
        """Boolean matrix ``[x_i, x_j] == 0`` (reflexive)."""
        if self._comm is None:
            F, d = self.field, self.L.dim
            P = self.rep_matrix()
            N = len(P)
            comm = np.zeros((N, N), dtype=bool)
            ads = self.L.ad_batch(P)  # (N, d, d)
            chunk = max(1, 2_000_000 // max(1, N * d * d))
            for s in range(0, N, chunk):
                B = F.reduce(np.einsum("nde,me->nmd", ads[s:s + chunk], P))
                comm[s:s + chunk] = ~F.nonzero_mask(B).any(axis=2)
            self._comm = comm
        return self._comm

    def perp(self, i: int) -> list[int]:
        """Points commuting with point ``i``, excluding ``i`` itself."""
        row = self.commuting[i]
        return [j for j in np.flatnonzero(row) if j != i]

    def perp_reflexive(self, i: int) -> np.ndarray:
        return self.commuting[i]

    # -- lines ------------------------------------------------------------
    def hyperbolic_lines(self) -> list[GeomLine]:
        return [GeomLine(LineKind.Hyperbolic, pts) for pts in self.hyperbolic]

    def line_through(self, i: int, j: int) -> GeomLine | None:
        k = self.line_of_pair.get((min(i, j), max(i, j)))
        return None if k is None else GeomLine(LineKind.Hyperbolic, self.hyperbolic[k])

    def polar_line(self, i: int, j: int) -> GeomLine:
        """``({x,y}^perp)^perp`` inside the point set (reflexive perp)."""
        if i == j or not self.commuting[i, j]:
            raise ValueError("not a polar pair")
        C = self.commuting
        common = C[i] & C[j]
        members = np.all(C[:, common], axis=1)
        return GeomLine(LineKind.Polar, tuple(int(k) for k in np.flatnonzero(members)))

    def polar_lines(self) -> list[GeomLine]:
        seen: set = set()
        out = []
        C = self.commuting
        for i, j in zip(*np.nonzero(np.triu(C, 1))):
            if (int(i), int(j)) in seen:
                continue
            ln = self.polar_line(int(i), int(j))
            for a, b in itertools.combinations(ln.points, 2):
                seen.add((a, b))
            out.append(ln)
        return out

    # -- exports ------------------------------------------------------------
    def to_json(self, include_polar: bool = True) -> dict:
        F = self.field
        out = {"points": [F.array_to_json(r) for r in self.reps],
               "hyperbolic_lines": [list(map(int, ln)) for ln in self.hyperbolic],
               "partial": self.partial}
        if include_polar:
            out["polar_lines"] = [list(map(int, ln.points)) for ln in self.polar_lines()]
        return out

    def to_dot(self) -> str:
        F = self.field
        lines = ["graph sl2_geometry {", "  node [shape=point];"]
        for i, r in enumerate(self.reps):
            label = ",".join(str(F.scalar_to_json(c)) for c in r)
            lines.append(f'  p{i} [label="{label}", xlabel="{i}"];')
        C = self.commuting
        for i, j in zip(*np.nonzero(np.triu(~C, 1))):
            lines.append(f"  p{i} -- p{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _conic_indices(geom: Geometry, i: int, j: int, gij, params) -> list[int]:
    """Indices of all conic points on the sl2-line through points i and j (adding new ones)."""
    F, L = geom.field, geom.L
    x, y = geom.reps[i], geom.reps[j]
    xy = L.bracket(x, y)
    pts = np.array([F.reduce(x * gij + y * F.mul(t, t) + xy * t) for t in params], dtype=x.dtype)
    pts = _normalize_rows(F, pts)
    out = [i, j]
    for v in pts:
        k, _ = geom._add(v)
        if k not in out:
            out.append(k)
    return out


def _add_exp_orbit(geom: Geometry, i: int, j: int, params):
    F, L = geom.field, geom.L
    for a, b in ((i, j), (j, i)):
        if geom.is_sandwich(a):
            continue
        xa, xb = geom.reps[a], geom.reps[b]
        ab = L.bracket(xa, xb)
        for t in params:
            geom._add(projective_normalize(F, F.reduce(xb + ab * t)))


def build_geometry(L: StructureLieAlgebra, seeds=None, budget: int = 5000, brute_force: bool = False,
                   rational_params=(1, -1, 2), exp_orbits: bool = False) -> Geometry:
    """Close a seed set of extremal points under taking sl2-lines.

    With ``brute_force`` every extremal point of a small algebra over F_p is
    enumerated first. The closure stops once more than ``budget`` points are
    known; the result is then flagged ``partial``.

    ``exp_orbits`` also adds ``exp(x, lam) y = y + lam [x, y]`` for pure ``x``
    and noncommuting ``y`` with ``g(x, y) = 0``, pairs that span no sl2.
    """
    F = L.field
    geom = Geometry(L)
    if brute_force:
        X = enumerate_extremal(L)
        seeds = list(_normalize_rows(F, X))
    elif seeds is None:
        seeds = list(L.extremal_generators)
    for s in seeds:
        s = L.element(s)
        if L.is_zero(s):
            continue
        try:
            geom._add(projective_normalize(F, s))
        except NotExtremal as e:
            raise NotExtremal("seed point is not extremal") from e
    params = list(F.units()) if F.is_finite else [F(t) for t in rational_params]
    i = 0
    while i < geom.n_points:
        if geom.n_points > budget:
            geom.partial = True
            break
        xi = geom.reps[i]
        P = geom.rep_matrix()[:i]
        if i:
            A = L.ad(xi)
            br = F.reduce(P @ A.T)
            noncomm = np.flatnonzero(F.nonzero_mask(br).any(axis=1))
            gvals = F.reduce(P @ geom.grows[i])
            for j in map(int, noncomm):
                key = (j, i)
                if key in geom.line_of_pair:
                    continue
                if gvals[j] == 0:
                    geom.skipped_pairs += 1
                    if exp_orbits:
                        _add_exp_orbit(geom, i, j, params)
                    continue
                idx = _conic_indices(geom, i, j, geom.g(i, j), params)
                k = len(geom.hyperbolic)
                geom.hyperbolic.append(tuple(sorted(idx)))
                for a, b in itertools.combinations(idx, 2):
                    geom.line_of_pair[(min(a, b), max(a, b))] = k
        i += 1
    geom._comm = None
    return geom


# -- queries ------------------------------------------------------------------

def perp_and_polar(geom: Geometry, i: int, j: int | None = None) -> dict:
    out = {"perp": geom.perp(i)}
    if j is not None:
        out["polar_line"] = geom.polar_line(i, j)
    return out


@dataclass
class SpanReport:
    passed: bool
    span_dim: int
    size: int
    points_in_span: int
    oval: bool
    conic_forms: int
    notes: list = dc_field(default_factory=list)


def _ternary_quadric_kernel(F: FieldSpec, coords: np.ndarray) -> int:
    """Dimension of the space of ternary quadratic forms vanishing on ``coords``."""
    a, b, c = coords[:, 0], coords[:, 1], coords[:, 2]
    M = np.stack([a * a, b * b, c * c, a * b, a * c, b * c], axis=1)
    return kernel(F, F.reduce(M)).dim


def polar_span_check(L: StructureLieAlgebra, geom: Geometry, line: GeomLine) -> SpanReport:
    """The line spans a projective plane meeting the point set exactly in an oval/conic."""
    F = geom.field
    R = np.array([geom.reps[k] for k in line.points], dtype=geom.reps[0].dtype)
    S = Subspace.span(F, list(R), L.dim)
    notes = []
    inside = [k for k in range(geom.n_points) if S.contains(geom.reps[k])]
    if S.dim != 3:
        notes.append(f"span dimension {S.dim}")
    if set(inside) != set(line.points):
        notes.append("extra extremal points in the span")
    oval = all(rank(F, R[list(t)]) == 3 for t in itertools.combinations(range(len(R)), 3))
    if not oval:
        notes.append("three collinear points")
    forms = _ternary_quadric_kernel(F, np.array([S.coords(r) for r in R])) if S.dim == 3 else 0
    if forms == 0:
        notes.append("no conic through the points")
    if F.is_finite and not geom.partial and len(line.points) != F.order + 1:
        notes.append(f"{len(line.points)} points instead of q+1")
    return SpanReport(not notes, S.dim, len(line.points), len(inside), oval, forms, notes)


def line_meets_perp(geom: Geometry, i: int, line: GeomLine):
    """Unique point of ``line`` commuting with point ``i``; ``"contained"`` if all do."""
    C = geom.commuting
    hits = [k for k in line.points if C[i, k]]
    if len(hits) == len(line.points):
        return "contained"
    if len(hits) != 1:
        raise ArithmeticError(f"line meets the perp in {len(hits)} points")
    return hits[0]


@dataclass
class PlaneReport:
    points: list
    n_points: int
    n_lines: int
    line_sizes: set
    classes: list
    passed: bool
    notes: list = dc_field(default_factory=list)


def symplectic_plane(L: StructureLieAlgebra, x, z, y, budget: int = 5000) -> PlaneReport:
    """Plane generated by the sl2-lines xz and zy; checks the dual affine plane counts."""
    F = L.field
    x, z, y = L.element(x), L.element(z), L.element(y)
    if L.is_zero(L.bracket(x, z)) or L.is_zero(L.bracket(z, y)) or not L.is_zero(L.bracket(x, y)):
        raise ValueError("not a symplectic triple")
    if rank(F, np.array([x, z, y])) < 3:
        raise ValueError("not a symplectic triple")
    geom = build_geometry(L, seeds=[x, z, y], budget=budget)
    notes = []
    pts = list(range(geom.n_points))
    C = geom.commuting
    # non-collinear = distinct and commuting
    classes, seen = [], set()
    for i in pts:
        if i in seen:
            continue
        cls = sorted(int(k) for k in np.flatnonzero(C[i]))
        classes.append(cls)
        seen.update(cls)
    equivalence = all(all(np.array_equal(C[a], C[cls[0]]) for a in cls) for cls in classes)
    if not equivalence:
        notes.append("non-collinearity is not an equivalence relation")
    sizes = {len(ln) for ln in geom.hyperbolic}
    if F.is_finite and not geom.partial:
        q = F.order
        if geom.n_points != q * q + q:
            notes.append(f"{geom.n_points} points, expected {q * q + q}")
        if len(geom.hyperbolic) != q * q:
            notes.append(f"{len(geom.hyperbolic)} lines, expected {q * q}")
        if sizes != {q + 1}:
            notes.append(f"line sizes {sizes}")
        if len(classes) != q + 1 or {len(c) for c in classes} != {q}:
            notes.append(f"classes {[len(c) for c in classes]}")
    if geom.partial:
        notes.append("partial")
    return PlaneReport([geom.reps[i] for i in pts], geom.n_points, len(geom.hyperbolic), sizes, classes,
                       not notes, notes)


# -- triples ------------------------------------------------------------------

class TripleKind(enum.Enum):
    Sp3 = "sp3"
    PSp3 = "psp3"


@dataclass
class TripleClass:
    kind: TripleKind
    dim: int
    center_dim: int
    identities: dict
    table_verified: bool


def triple_identities(L: StructureLieAlgebra, x, y, z) -> dict:
    """The six bracket relations of a normalised symplectic triple."""
    F = L.field
    b = L.bracket
    xy, yz = b(x, y), b(y, z)
    xyz = b(x, yz)
    eq = lambda u, v: not F.nonzero_mask(F.reduce(u - v)).any()  # noqa: E731
    zero = L.zero()
    two = F(2)
    return {
        "[x,[x,[y,z]]] = 0": eq(b(x, xyz), zero),
        "[z,[x,[y,z]]] = 0": eq(b(z, xyz), zero),
        "[y,[x,[y,z]]] = [x,y] - [y,z]": eq(b(y, xyz), F.reduce(xy - yz)),
        "[[x,y],[y,z]] = [x,y] + [y,z]": eq(b(xy, yz), F.reduce(xy + yz)),
        "[[x,y],[x,[y,z]]] = 2x - [x,[y,z]]": eq(b(xy, xyz), F.reduce(x * two - xyz)),
        "[[y,z],[x,[y,z]]] = [x,[y,z]] - 2z": eq(b(yz, xyz), F.reduce(xyz - z * two)),
    }


def normalize_triple(L: StructureLieAlgebra, x, y, z, table: ExtremalFormTable | None = None):
    F = L.field
    gx = table.g_row(x) if table is not None else extremal_row(L, x)
    gz = table.g_row(z) if table is not None else extremal_row(L, z)
    gxy, gzy = F.reduce(gx @ y), F.reduce(gz @ y)
    if gxy == 0 or gzy == 0:
        raise ValueError("precondition violated: g(x,y) and g(z,y) must be nonzero")
    return F.reduce(x * F.inv(gxy)), y, F.reduce(z * F.inv(gzy))


def classify_triple(L: StructureLieAlgebra, table: ExtremalFormTable | None, x, y, z) -> TripleClass:
    F = L.field
    x, y, z = L.element(x), L.element(y), L.element(z)
    if L.is_zero(L.bracket(x, y)) or L.is_zero(L.bracket(y, z)) or not L.is_zero(L.bracket(x, z)):
        raise ValueError("precondition violated: need [x,y] != 0, [y,z] != 0, [x,z] = 0")
    if rank(F, np.array([x, y, z])) < 3:
        raise ValueError("precondition violated: z lies in <x,y>")
    x, y, z = normalize_triple(L, x, y, z, table)
    b = L.bracket
    spanning = [x, y, z, b(x, y), b(y, z), b(x, b(y, z))]
    sub, _ = from_bracket_closure(F, L.bracket, [x, y, z], cap=L.dim)
    span_dim = rank(F, np.array(spanning))
    if sub.dim not in (5, 6) or span_dim != sub.dim:
        raise ArithmeticError("table mismatch")
    ids = triple_identities(L, x, y, z)
    cdim = center(sub).dim
    kind = TripleKind.Sp3 if sub.dim == 6 else TripleKind.PSp3
    ok = all(ids.values()) and cdim == (1 if sub.dim == 6 else 0)
    return TripleClass(kind, sub.dim, cdim, ids, ok)


# -- health ---------------------------------------------------------------------

@dataclass
class HealthReport:
    connected: bool
    nondegenerate: bool
    consistent: bool  # False only if rad g = 0 but the geometry is degenerate
    components: int
    duplicate_perps: list


def geometry_health(geom: Geometry, g_radical_empty: bool) -> HealthReport:
    C = geom.commuting
    N = geom.n_points
    adj = ~C
    comp = -np.ones(N, dtype=int)
    ncomp = 0
    for s in range(N):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in np.flatnonzero(adj[u] & (comp < 0)):
                comp[v] = ncomp
                dq.append(int(v))
        ncomp += 1
    _, inv, counts = np.unique(C, axis=0, return_inverse=True, return_counts=True)
    dups = [list(map(int, np.flatnonzero(inv.reshape(-1) == k))) for k in np.flatnonzero(counts > 1)]
    nondeg = not dups
    return HealthReport(ncomp <= 1, nondeg, nondeg or not g_radical_empty, ncomp, dups)
