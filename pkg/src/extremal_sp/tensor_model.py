"""Concrete model of the symplectic Lie algebra on symmetric matrices.

An element is a symmetric matrix ``S`` acting on V as ``v -> S J v`` where J is
the Gram matrix. The pure tensor ``v (x) f_v`` is ``v v^T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import StructureLieAlgebra, from_bracket_closure, structure_constants
from .fields import FieldSpec
from .linalg import Subspace, rank
from .symplectic import SymplecticSpace, f_eval, standard_space


class SpaceMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SfElement:
    space: SymplecticSpace
    S: np.ndarray

    def __post_init__(self):
        F = self.space.field
        if self.S.shape != (self.space.n, self.space.n):
            raise ValueError("coefficient matrix has the wrong shape")
        if F.nonzero_mask(F.reduce(self.S - self.S.T)).any():
            raise ValueError("coefficient matrix is not symmetric")

    def _same(self, other: "SfElement"):
        if other.space is not self.space and not (
            other.space.field == self.space.field and np.array_equal(other.space.gram, self.space.gram)
        ):
            raise SpaceMismatch("elements live over different spaces")

    def __add__(self, other: "SfElement") -> "SfElement":
        self._same(other)
        return SfElement(self.space, self.space.field.reduce(self.S + other.S))

    def __sub__(self, other: "SfElement") -> "SfElement":
        self._same(other)
        return SfElement(self.space, self.space.field.reduce(self.S - other.S))

    def scale(self, c) -> "SfElement":
        F = self.space.field
        return SfElement(self.space, F.reduce(self.S * F(c)))

    def __eq__(self, other):
        if not isinstance(other, SfElement):
            return NotImplemented
        self._same(other)
        return bool(np.all(self.S == other.S))

    def __hash__(self):
        return hash(tuple(self.S.flat))

    @property
    def endomorphism(self) -> np.ndarray:
        return self.space.field.matmul(self.S, self.space.gram)

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "S": self.space.field.array_to_json(self.S)}

    @staticmethod
    def from_json(obj: dict) -> "SfElement":
        sp = SymplecticSpace.from_json(obj["space"])
        return SfElement(sp, sp.field.array_from_json(obj["S"]))


def pure(space: SymplecticSpace, v) -> SfElement:
    v = space.vector(v)
    if not space.field.nonzero_mask(v).any():
        raise ValueError("zero vector")
    return SfElement(space, space.field.reduce(np.outer(v, v)))


def sym_pair(space: SymplecticSpace, v, w) -> SfElement:
    v, w = space.vector(v), space.vector(w)
    return SfElement(space, space.field.reduce(np.outer(v, w) + np.outer(w, v)))


def _bracket_S(F: FieldSpec, J: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    AJB = F.matmul(F.matmul(A, J), B)
    return F.reduce(AJB + AJB.T)  # (A J B)^T = -B J A


def bracket_model(a: SfElement, b: SfElement) -> SfElement:
    a._same(b)
    return SfElement(a.space, _bracket_S(a.space.field, a.space.gram, a.S, b.S))


def act(a: SfElement, v) -> np.ndarray:
    v = a.space.vector(v)
    return a.space.field.matmul(a.endomorphism, v)


def model_extremal_form(a: SfElement, b: SfElement):
    """``trace(S_a J S_b J^T)``; equals ``f(v,w)^2`` on pure tensors."""
    a._same(b)
    F, J = a.space.field, a.space.gram
    M = F.matmul(F.matmul(F.matmul(a.S, J), b.S), J.T)
    return F.reduce(np.trace(M))


# -- coordinates on the symmetric matrices ------------------------------------

def sf_index(n: int) -> list[tuple[int, int]]:
    """Coordinate order: diagonal cells first, then ``(i, j)`` with ``i < j``."""
    return [(i, i) for i in range(n)] + [(i, j) for i in range(n) for j in range(i + 1, n)]


def sf_coords(S: np.ndarray) -> np.ndarray:
    n = S.shape[0]
    rows, cols = zip(*sf_index(n))
    return S[list(rows), list(cols)].copy()


def from_coords(F: FieldSpec, c: np.ndarray, n: int) -> np.ndarray:
    S = F.zeros((n, n))
    for k, (i, j) in enumerate(sf_index(n)):
        S[i, j] = c[k]
        S[j, i] = c[k]
    return S


def sf_dim(n: int) -> int:
    return n * (n + 1) // 2


def coord_bracket(space: SymplecticSpace):
    """Bracket on ``sf_coords`` vectors."""
    F, J, n = space.field, space.gram, space.n

    def br(a, b):
        return sf_coords(_bracket_S(F, J, from_coords(F, a, n), from_coords(F, b, n)))
    return br


def pure_coords(space: SymplecticSpace, v) -> np.ndarray:
    return sf_coords(pure(space, v).S)


def sp_identification(space: SymplecticSpace) -> dict:
    """Compare the span of the pure tensors with ``{M : M^T J + J M = 0}``."""
    if not space.is_nondegenerate:
        raise ValueError("degenerate form")
    F, n, J = space.field, space.n, space.gram
    spanning = [space.basis_vector(i) for i in range(n)]
    spanning += [F.reduce(space.basis_vector(i) + space.basis_vector(j)) for i in range(n) for j in range(i + 1, n)]
    pures = [pure(space, v) for v in spanning]
    dim_sf = rank(F, np.array([sf_coords(p.S) for p in pures]))
    # linear map M -> M^T J + J M on n^2 coordinates
    cols = []
    for k in range(n * n):
        M = F.zeros((n, n))
        M.flat[k] = F.one
        cols.append(F.reduce(F.matmul(M.T, J) + F.matmul(J, M)).reshape(-1))
    dim_sp = n * n - rank(F, np.array(cols).T)
    endos = np.array([p.endomorphism.reshape(-1) for p in pures])
    injective = rank(F, endos) == dim_sf
    inside = all(not F.nonzero_mask(F.reduce(F.matmul(p.endomorphism.T, J) + F.matmul(J, p.endomorphism))).any()
                 for p in pures)
    return {"dim_sf": dim_sf, "dim_sp": dim_sp, "injective": injective, "inside": inside,
            "equal": bool(dim_sf == dim_sp and injective and inside)}


# -- algebra builders ---------------------------------------------------------

def sf_algebra(space: SymplecticSpace) -> StructureLieAlgebra:
    """Structure constants on the coordinate basis ``pure(e_i)``, ``sym_pair(e_i, e_j)``.

    Extremal generators are ``pure(e_i)`` and ``pure(e_i + e_j)``.
    """
    F, n = space.field, space.n
    d = sf_dim(n)
    basis = [F.eye(d)[k] for k in range(d)]
    C = structure_constants(F, basis, coord_bracket(space), lambda v: v)
    gens = [pure_coords(space, space.basis_vector(i)) for i in range(n)]
    gens += [pure_coords(space, F.reduce(space.basis_vector(i) + space.basis_vector(j)))
             for i in range(n) for j in range(i + 1, n)]
    names = tuple(f"e{i + 1}e{i + 1}" if i == j else f"e{i + 1}e{j + 1}" for i, j in sf_index(n))
    return StructureLieAlgebra(F, C, tuple(gens), names)


def sp_algebra(F: FieldSpec, m: int) -> StructureLieAlgebra:
    return sf_algebra(standard_space(F, m))


def endomorphism_oracle(space: SymplecticSpace):
    """Commutator on flattened ``n x n`` matrices."""
    F, n = space.field, space.n

    def br(a, b):
        A, B = a.reshape(n, n), b.reshape(n, n)
        return F.reduce(F.matmul(A, B) - F.matmul(B, A)).reshape(-1)
    return br


W_INDICES = (0, 1, 2)  # <e1, e2, e3> inside the standard 4-dim space


def example_space(F: FieldSpec) -> SymplecticSpace:
    """The 4-dim space with f(e1,e3) = f(e2,e4) = 1."""
    return standard_space(F, 2)


def example_w_space(F: FieldSpec) -> SymplecticSpace:
    """The degenerate restriction of :func:`example_space` to <e1,e2,e3>; radical <e2>."""
    V = example_space(F)
    idx = list(W_INDICES)
    return SymplecticSpace(F, V.gram[np.ix_(idx, idx)].copy())


def _w_vectors(F: FieldSpec) -> list[np.ndarray]:
    out = []
    for i in range(3):
        v = F.zeros(3)
        v[i] = F.one
        out.append(v)
    for i in range(3):
        for j in range(i + 1, 3):
            out.append(F.reduce(out[i] + out[j]))
    return out


def _lift_w(F: FieldSpec, w: np.ndarray) -> np.ndarray:
    v = F.zeros(4)
    v[list(W_INDICES)] = w
    return v


def example_triple_vectors(F: FieldSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectors e1, e3, e1 - e2 of W (3 coordinates)."""
    e1, e3 = F.array([1, 0, 0]), F.array([0, 0, 1])
    return e1, e3, F.array([1, -1, 0])


@dataclass
class ModelSubalgebra:
    algebra: StructureLieAlgebra
    embed: np.ndarray
    space: SymplecticSpace
    to_ambient: object     # vector of W -> ambient vector of the pure tensor
    triple: tuple           # x, y, z in algebra coordinates

    def coords(self, ambient_vec: np.ndarray) -> np.ndarray:
        F = self.algebra.field
        sub = Subspace(F, self.embed.shape[1], self.embed, tuple(_pivots(F, self.embed)))
        return sub.coords(ambient_vec)


def _pivots(F: FieldSpec, E: np.ndarray) -> list[int]:
    out = []
    for row in E:
        out.append(int(np.flatnonzero(F.nonzero_mask(row))[0]))
    return out


def sp3_algebra(F: FieldSpec) -> ModelSubalgebra:
    """Closure of ``pure(w)``, ``w`` in W, inside the 4-dim model (dim 6, 1-dim center)."""
    V = example_space(F)
    amb = lambda w: pure_coords(V, _lift_w(F, w))  # noqa: E731
    L, E = from_bracket_closure(F, coord_bracket(V), [amb(w) for w in _w_vectors(F)])
    m = ModelSubalgebra(L, E, V, amb, ())
    m.triple = tuple(m.coords(amb(w)) for w in example_triple_vectors(F))
    return m


def psp3_algebra(F: FieldSpec) -> ModelSubalgebra:
    """Closure of the endomorphisms ``pure(w) J_W`` on the degenerate W (dim 5, no center)."""
    W = example_w_space(F)
    amb = lambda w: pure(W, w).endomorphism.reshape(-1)  # noqa: E731
    L, E = from_bracket_closure(F, endomorphism_oracle(W), [amb(w) for w in _w_vectors(F)])
    m = ModelSubalgebra(L, E, W, amb, ())
    m.triple = tuple(m.coords(amb(w)) for w in example_triple_vectors(F))
    return m


def f_squared(space: SymplecticSpace, v, w):
    F = space.field
    x = f_eval(space, v, w)
    return F.mul(x, x)
