"""Lie algebras given by structure constants, with the extremal form.

Elements are coordinate vectors (1-d arrays) w.r.t. the algebra's basis.
``C[i, j]`` holds the coordinates of ``[b_i, b_j]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .fields import FieldSpec, quadratic_extension
from .linalg import EchelonBasis, Subspace, inverse, kernel, row_reduce, solve


class DimensionBudgetExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"dimension budget exceeded (cap {cap})")
        self.cap = cap


class NotExtremal(ValueError):
    def __init__(self, detail: str = ""):
        super().__init__("not extremal" + (f": {detail}" if detail else ""))


class AlgebraParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StructureLieAlgebra:
    field: FieldSpec
    C: np.ndarray
    extremal_generators: tuple = ()
    names: tuple = ()

    @property
    def dim(self) -> int:
        return self.C.shape[0]

    # -- elementary operations ---------------------------------------------
    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.one
        return v

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        F, d = self.field, self.dim
        t = F.reduce(x @ self.C.reshape(d, d * d)).reshape(d, d)
        return F.reduce(y @ t)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix with ``ad(x) @ y == [x, y]``."""
        F, d = self.field, self.dim
        return F.reduce(x @ self.C.reshape(d, d * d)).reshape(d, d).T.copy()

    def ad_batch(self, X: np.ndarray) -> np.ndarray:
        """``ad`` of each row of ``X``; shape ``(k, d, d)``."""
        F, d = self.field, self.dim
        return F.reduce(X @ self.C.reshape(d, d * d)).reshape(-1, d, d).transpose(0, 2, 1)

    def is_zero(self, x: np.ndarray) -> bool:
        return not self.field.nonzero_mask(x).any()

    def element(self, data) -> np.ndarray:
        v = self.field.array(data)
        if v.shape != (self.dim,):
            raise ValueError(f"element of length {self.dim} expected")
        return v

    # -- consistency checks --------------------------------------------------
    def antisymmetry_ok(self) -> bool:
        F = self.field
        S = F.reduce(self.C + self.C.transpose(1, 0, 2))
        return not F.nonzero_mask(S).any()

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        """Basis triples ``i<j<k`` where the Jacobi identity fails (exhaustive)."""
        F, C = self.field, self.C
        # T[i,j,k,:] = [b_i, [b_j, b_k]]
        T = F.reduce(np.einsum("jkl,ilm->ijkm", C, C))
        J = F.reduce(T + T.transpose(1, 2, 0, 3) + T.transpose(2, 0, 1, 3))
        bad = np.argwhere(F.nonzero_mask(J).any(axis=3))
        return sorted({tuple(sorted(map(int, t))) for t in bad})

    def jacobi_ok(self) -> bool:
        return self.antisymmetry_ok() and not self.jacobi_violations()

    # -- derived objects -----------------------------------------------------
    def with_generators(self, gens) -> "StructureLieAlgebra":
        return StructureLieAlgebra(self.field, self.C, tuple(self.field.array(g) for g in gens), self.names)

    # -- JSON ----------------------------------------------------------------
    def to_json(self) -> dict:
        F, d = self.field, self.dim
        entries = []
        for i in range(d):
            for j in range(i + 1, d):
                v = self.C[i, j]
                nz = [[int(k), F.scalar_to_json(v[k])] for k in np.flatnonzero(F.nonzero_mask(v))]
                if nz:
                    entries.append([i, j, nz])
        out = {"field": F.to_json(), "dim": d, "bracket": entries,
               "extremal_generators": [F.array_to_json(g) for g in self.extremal_generators]}
        if self.names:
            out["names"] = list(self.names)
        return out

    @staticmethod
    def from_json(obj: dict) -> "StructureLieAlgebra":
        try:
            F = FieldSpec.from_json(obj["field"])
        except (KeyError, TypeError, ValueError) as e:
            raise AlgebraParseError(f"field: {e}") from e
        try:
            d = int(obj["dim"])
        except (KeyError, TypeError, ValueError) as e:
            raise AlgebraParseError(f"dim: {e}") from e
        C = F.zeros((d, d, d))
        for n, entry in enumerate(obj.get("bracket", [])):
            try:
                i, j, terms = entry
                i, j = int(i), int(j)
                if not 0 <= i < j < d:
                    raise ValueError(f"indices ({i},{j}) must satisfy 0 <= i < j < {d}")
                for k, c in terms:
                    k = int(k)
                    if not 0 <= k < d:
                        raise ValueError(f"target index {k} out of range")
                    val = F.scalar_from_json(c)
                    C[i, j, k] = val
                    C[j, i, k] = F.neg(val)
            except (TypeError, ValueError, ZeroDivisionError) as e:
                raise AlgebraParseError(f"bracket[{n}]: {e}") from e
        gens = []
        for n, g in enumerate(obj.get("extremal_generators", [])):
            try:
                v = F.array_from_json(g)
                if v.shape != (d,):
                    raise ValueError(f"length {len(g)} != dim {d}")
            except (TypeError, ValueError, ZeroDivisionError) as e:
                raise AlgebraParseError(f"extremal_generators[{n}]: {e}") from e
            gens.append(v)
        return StructureLieAlgebra(F, C, tuple(gens), tuple(obj.get("names", ())))


def structure_constants(F: FieldSpec, basis: Sequence, bracket: Callable, coords: Callable) -> np.ndarray:
    """Structure tensor from a basis, an ambient bracket and a coordinate map."""
    d = len(basis)
    C = F.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            c = coords(bracket(basis[i], basis[j]))
            C[i, j] = c
            C[j, i] = F.reduce(-c)
    return C


def from_bracket_closure(F: FieldSpec, oracle: Callable, generators: Sequence, cap: int = 64,
                         check_jacobi: bool = True) -> tuple[StructureLieAlgebra, np.ndarray]:
    """Smallest bracket-closed subspace containing ``generators``.

    ``oracle(a, b)`` brackets two ambient vectors. Returns the induced algebra
    (basis = echelon rows of the closure) and the embedding matrix whose rows are
    those basis vectors in ambient coordinates.
    """
    gens = [F.array(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    ambient = len(gens[0])
    eb = EchelonBasis(F, ambient)
    work: list[np.ndarray] = []
    for g in gens:
        if eb.add(g):
            work.append(g)
            if len(eb) > cap:
                raise DimensionBudgetExceeded(cap)
    i = 0
    while i < len(work):
        for j in range(i):
            b = oracle(work[i], work[j])
            if eb.add(b):
                work.append(b)
                if len(eb) > cap:
                    raise DimensionBudgetExceeded(cap)
        i += 1
    E = eb.matrix()
    piv = list(eb.pivots)

    def coords(v):
        r = eb.reduce(v)
        if F.nonzero_mask(r).any():
            raise ArithmeticError("oracle is not closed on the computed span")
        return v[piv]

    C = structure_constants(F, list(E), oracle, coords)
    L = StructureLieAlgebra(F, C, tuple(g[piv] for g in gens if F.nonzero_mask(g).any()))
    if check_jacobi and not L.jacobi_ok():
        raise ArithmeticError("closure violates the Jacobi identity")
    return L, E


def subalgebra(L: StructureLieAlgebra, gens, cap: int = 64):
    return from_bracket_closure(L.field, L.bracket, gens, cap=cap)


def ad_matrix(L: StructureLieAlgebra, x) -> np.ndarray:
    return L.ad(L.element(x))


def center(L: StructureLieAlgebra) -> Subspace:
    F, d = L.field, L.dim
    # [b_i, x] = 0 for all i
    stacked = np.concatenate([L.ad(L.basis_vector(i)) for i in range(d)], axis=0)
    return kernel(F, stacked)


def ideal_generated(L: StructureLieAlgebra, seeds) -> Subspace:
    F, d = L.field, L.dim
    if isinstance(seeds, np.ndarray) and seeds.ndim == 1:
        seeds = [seeds]
    eb = EchelonBasis(F, d)
    queue = []
    for s in seeds:
        s = L.element(s)
        if eb.add(s):
            queue.append(s)
    ads = L.ad_batch(F.eye(d))
    while queue:
        v = queue.pop()
        for w in F.reduce(ads @ v):
            if eb.add(w):
                queue.append(w)
    return eb.subspace()


@dataclass
class ComplementSearch:
    found: bool
    basis: np.ndarray | None   # rows spanning a subalgebra S with S + N = L, S and N independent
    candidates: int            # points of the affine solution space modulo [N, N] that were tried


def find_complement(L: StructureLieAlgebra, N: Subspace, max_candidates: int = 100_000) -> ComplementSearch:
    """Search for a subalgebra complementing the ideal ``N``.

    Requires ``[N, N]`` to be central in ``L``. Modulo ``Z = [N, N]`` the
    section conditions are affine in the correction terms, and once those are
    fixed the ``Z`` part is affine again, so the search enumerates only the
    first solution space (finite fields) and solves the second. Over Q only
    the particular solution is tried.
    """
    F, d = L.field, L.dim
    ideal = N.basis
    Z = Subspace.span(F, [L.bracket(a, b) for a in ideal for b in ideal] or [F.zeros(d)], d)
    if not all(L.is_zero(L.bracket(z, L.basis_vector(i))) for z in Z.basis for i in range(d)):
        raise ValueError("[N, N] is not central")
    if not all(N.contains(L.bracket(L.basis_vector(i), a)) for a in ideal for i in range(d)):
        raise ValueError("N is not an ideal")
    eb = EchelonBasis(F, d)
    for z in Z.basis:
        eb.add(z)
    A = [a for a in ideal if eb.add(a)]
    W = [L.basis_vector(i) for i in range(d) if i not in set(N.pivots)]
    k, ra, rz = len(W), len(A), Z.dim
    full = np.array(W + A + list(Z.basis), dtype=ideal.dtype if len(ideal) else F.zeros(1).dtype)
    Minv = inverse(F, full)

    def co(v):
        return F.matmul(v.reshape(1, -1), Minv).reshape(-1)

    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    c = {pr: co(L.bracket(W[pr[0]], W[pr[1]]))[:k] for pr in pairs}

    def residue(alpha, beta):
        a = [F.reduce(alpha[i] @ np.array(A)) if ra else F.zeros(d) for i in range(k)]
        z = [F.reduce(beta[i] @ Z.basis) if rz else F.zeros(d) for i in range(k)]
        out = []
        for (i, j) in pairs:
            v = L.bracket(W[i] + a[i], W[j] + a[j])
            v = F.reduce(v - sum((c[i, j][t] * (W[t] + a[t] + z[t]) for t in range(k)), F.zeros(d)))
            out.append(co(v)[k:])
        return np.concatenate(out) if out else F.zeros(0)

    def affine(fn, nvars):
        base = fn(F.zeros(nvars))
        cols = []
        for u in range(nvars):
            e = F.zeros(nvars)
            e[u] = F.one
            cols.append(F.reduce(fn(e) - base))
        M = np.array(cols, dtype=base.dtype).T if cols else F.zeros((len(base), 0))
        return M, F.reduce(-base)

    zero_b = F.zeros((k, rz))
    a_rows = [p * (ra + rz) + q for p in range(len(pairs)) for q in range(ra)]
    z_rows = [p * (ra + rz) + ra + q for p in range(len(pairs)) for q in range(rz)]
    Ma, ba = affine(lambda x: residue(x.reshape(k, ra), zero_b)[a_rows], k * ra)
    x0 = solve(F, Ma, ba) if k * ra else F.zeros(0)
    if x0 is None:
        return ComplementSearch(False, None, 0)
    K = kernel(F, Ma).basis if k * ra else F.zeros((0, 0))
    total = F.order ** len(K) if F.is_finite else None
    if total is not None and total > max_candidates:
        raise ValueError(f"{total} candidates exceed the limit of {max_candidates}")

    def candidates():
        yield x0
        if not len(K):
            return
        if not F.is_finite:
            raise ValueError("particular solution failed and Q cannot be enumerated")
        for coeffs in itertools.product(list(F.elements()), repeat=len(K)):
            if any(cf != 0 for cf in coeffs):
                yield F.reduce(x0 + sum((cf * kv for cf, kv in zip(coeffs, K)), F.zeros(k * ra)))

    tried = 0
    for alpha in candidates():
        alpha = alpha.reshape(k, ra)
        tried += 1
        Mz, bz = affine(lambda y: residue(alpha, y.reshape(k, rz))[z_rows], k * rz)
        y = solve(F, Mz, bz) if k * rz else (F.zeros(0) if not np.any(F.nonzero_mask(bz)) else None)
        if y is None:
            continue
        beta = y.reshape(k, rz)
        rows = [F.reduce(W[i] + (alpha[i] @ np.array(A) if ra else 0) + (beta[i] @ Z.basis if rz else 0))
                for i in range(k)]
        return ComplementSearch(True, np.array(rows, dtype=full.dtype), tried)
    return ComplementSearch(False, None, tried)


def simplicity_probe(L: StructureLieAlgebra, rng: np.random.Generator | None = None, samples: int = 5) -> bool:
    rng = rng or np.random.default_rng(0)
    seeds = [L.basis_vector(i) for i in range(L.dim)]
    for _ in range(samples):
        v = L.field.random_array(rng, L.dim)
        if not L.is_zero(v):
            seeds.append(v)
    return all(ideal_generated(L, s).dim == L.dim for s in seeds)


# -- extremal form ------------------------------------------------------------

def extremal_row(L: StructureLieAlgebra, x: np.ndarray) -> np.ndarray:
    """``g(x, b_j)`` for every basis vector, read off ``[x,[x,b_j]] = 2 g(x,b_j) x``.

    Raises :class:`NotExtremal` if some ``[x,[x,b_j]]`` is not a multiple of x.
    A sandwich gets the zero row.
    """
    F = L.field
    A = L.ad(x)
    A2 = F.matmul(A, A)
    nz = np.flatnonzero(F.nonzero_mask(x))
    if nz.size == 0:
        raise ValueError("zero element")
    i0 = int(nz[0])
    c = F.reduce(A2[i0] * F.inv(x[i0]))
    if F.nonzero_mask(F.reduce(A2 - np.outer(x, c))).any():
        raise NotExtremal()
    return F.reduce(c * F.inv(F(2)))


@dataclass
class ExtremalFormTable:
    field: FieldSpec
    spanning: list
    gram: np.ndarray                 # g on the basis of L
    radical: Subspace
    gram_spanning: np.ndarray = dc_field(repr=False, default=None)

    def g(self, a: np.ndarray, b: np.ndarray):
        F = self.field
        return F.reduce(a @ F.reduce(self.gram @ b))

    def g_row(self, a: np.ndarray) -> np.ndarray:
        return self.field.reduce(a @ self.gram)

    @property
    def is_nondegenerate(self) -> bool:
        return self.radical.dim == 0


def extremal_form(L: StructureLieAlgebra, spanning=None) -> ExtremalFormTable:
    """Extremal form from a spanning list of extremal elements.

    Defaults to an extremal spanning set grown from ``L.extremal_generators``.
    """
    F, d = L.field, L.dim
    if spanning is None:
        spanning = extremal_spanning_set(L)
    X = F.array(np.array([np.asarray(s) for s in spanning], dtype=object)) if spanning else F.zeros((0, d))
    rows = [extremal_row(L, x) for x in X]
    R = np.array(rows, dtype=X.dtype) if rows else F.zeros((0, d))
    _, piv = row_reduce(F, X.T)
    if len(piv) < d:
        raise ValueError(f"extremal elements span only {len(piv)} of {d} dimensions")
    XB, RB = X[piv], R[piv]
    G = F.matmul(inverse(F, XB), RB)
    if F.nonzero_mask(F.reduce(F.matmul(X, G) - R)).any():
        raise NotExtremal("extracted form is inconsistent across the spanning set")
    if F.nonzero_mask(F.reduce(G - G.T)).any():
        raise NotExtremal("extracted form is not symmetric")
    return ExtremalFormTable(F, list(X), G, kernel(F, G), F.matmul(F.matmul(X, G), X.T))


def extremal_spanning_set(L: StructureLieAlgebra, gens=None) -> list[np.ndarray]:
    """Grow extremal elements from ``gens`` until they span ``L``.

    New elements are ``exp(x,1) y = y + [x,y] + g(x,y) x`` for pure ``x``; these
    are extremal because ``exp(x,1)`` is an automorphism.
    """
    F, d = L.field, L.dim
    gens = [L.element(g) for g in (gens if gens is not None else L.extremal_generators)]
    if not gens:
        raise ValueError("algebra has no extremal generators")
    eb = EchelonBasis(F, d)
    pts, grows = [], []
    for g in gens:
        if eb.add(g):
            pts.append(g)
            grows.append(extremal_row(L, g))
    changed = True
    while len(eb) < d and changed:
        changed = False
        n = len(pts)
        for i in range(n):
            if not F.nonzero_mask(grows[i]).any():
                continue  # sandwich
            for j in range(n):
                if i == j:
                    continue
                x, y = pts[i], pts[j]
                gxy = F.reduce(grows[i] @ y)
                u = F.reduce(y + L.bracket(x, y) + gxy * x)
                if eb.add(u):
                    pts.append(u)
                    grows.append(extremal_row(L, u))
                    changed = True
                    if len(eb) == d:
                        return pts
    if len(eb) < d:
        raise ValueError(f"extremal elements span only {len(eb)} of {d} dimensions")
    return pts


def associativity_ok(L: StructureLieAlgebra, table: ExtremalFormTable, rng: np.random.Generator,
                     samples: int = 20) -> bool:
    F = L.field
    for _ in range(samples):
        x, y, z = (F.random_array(rng, L.dim) for _ in range(3))
        if table.g(L.bracket(x, y), z) != table.g(x, L.bracket(y, z)):
            return False
    return True


# -- change of field / basis --------------------------------------------------

def base_change_quadratic(L: StructureLieAlgebra) -> StructureLieAlgebra:
    E = quadratic_extension(L.field)
    C = E.array(np.asarray(L.C, dtype=object))
    gens = tuple(E.array(np.asarray(g, dtype=object)) for g in L.extremal_generators)
    out = StructureLieAlgebra(E, C, gens, L.names)
    if not out.jacobi_ok():
        raise ArithmeticError("Jacobi identity fails after base change")
    return out


def transport(L: StructureLieAlgebra, T: np.ndarray, scale=1) -> StructureLieAlgebra:
    """Same algebra in the basis given by the rows of ``T`` with bracket scaled by ``scale``.

    Old coordinates ``u`` become ``u @ T^{-1}``.
    """
    F, d = L.field, L.dim
    T = F.array(T)
    Ti = inverse(F, T)
    s = F(scale)
    C = F.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            v = F.reduce(F.matmul(L.bracket(T[i], T[j]), Ti) * s)
            C[i, j] = v
            C[j, i] = F.reduce(-v)
    gens = tuple(F.matmul(g, Ti) for g in L.extremal_generators)
    return StructureLieAlgebra(F, C, gens)


def random_invertible(F: FieldSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        T = F.random_array(rng, (n, n))
        if len(row_reduce(F, T)[1]) == n:
            return T
