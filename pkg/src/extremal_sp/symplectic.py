"""Alternating bilinear forms, possibly degenerate, and Witt-style bases."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import FieldSpec
from .linalg import Subspace, kernel, rank


@dataclass(frozen=True)
class SymplecticSpace:
    field: FieldSpec
    gram: np.ndarray

    def __post_init__(self):
        G = self.gram
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] < 1:
            raise ValueError("gram must be a nonempty square matrix")
        F = self.field
        if F.nonzero_mask(F.reduce(G + G.T)).any():
            raise ValueError("gram is not antisymmetric")
        if any(G[i, i] != 0 for i in range(G.shape[0])):
            raise ValueError("gram has nonzero diagonal")

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    @property
    def rank(self) -> int:
        return rank(self.field, self.gram)

    @property
    def is_nondegenerate(self) -> bool:
        return self.rank == self.n

    def vector(self, data) -> np.ndarray:
        v = self.field.array(data)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {self.n} expected, got shape {v.shape}")
        return v

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.n)
        v[i] = self.field.one
        return v

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "dim": self.n, "gram": self.field.array_to_json(self.gram)}

    @staticmethod
    def from_json(obj: dict) -> "SymplecticSpace":
        F = FieldSpec.from_json(obj["field"])
        G = F.array_from_json(obj["gram"])
        if G.shape != (obj["dim"], obj["dim"]):
            raise ValueError("gram shape does not match dim")
        return SymplecticSpace(F, G)


def standard_space(F: FieldSpec, m: int, r: int = 0) -> SymplecticSpace:
    """Basis e_1..e_m, f_1..f_m, then r radical vectors; f(e_i, f_i) = 1.

    For m = 2 this is the form with f(e1,e3) = f(e2,e4) = 1.
    """
    if m < 0 or r < 0 or m + r == 0:
        raise ValueError("need m >= 1 or r >= 1")
    n = 2 * m + r
    G = F.zeros((n, n))
    for i in range(m):
        G[i, m + i] = F.one
        G[m + i, i] = F.neg(F.one)
    return SymplecticSpace(F, G)


def f_eval(s: SymplecticSpace, v, w):
    v, w = s.vector(v), s.vector(w)
    F = s.field
    return F.reduce(v @ F.reduce(s.gram @ w))


def radical(s: SymplecticSpace) -> Subspace:
    return kernel(s.field, s.gram)


@dataclass(frozen=True)
class WittBasis:
    pairs: list[tuple[np.ndarray, np.ndarray]]
    radical_basis: list[np.ndarray]

    @property
    def m(self) -> int:
        return len(self.pairs)

    def vectors(self) -> list[np.ndarray]:
        return [e for e, _ in self.pairs] + [f for _, f in self.pairs] + list(self.radical_basis)


def witt_basis(s: SymplecticSpace) -> WittBasis:
    """Peel hyperbolic pairs greedily, always taking the lexicographically first usable pair."""
    F = s.field
    rest = [s.basis_vector(i) for i in range(s.n)]
    pairs = []
    while True:
        found = None
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                c = f_eval(s, rest[i], rest[j])
                if c != 0:
                    found = (i, j, c)
                    break
            if found:
                break
        if found is None:
            break
        i, j, c = found
        e = rest[i]
        f = F.reduce(rest[j] * F.inv(c))
        pairs.append((e, f))
        nxt = []
        for k, u in enumerate(rest):
            if k in (i, j):
                continue
            # project onto <e,f>^perp
            u = F.reduce(u - f_eval(s, u, f) * e + f_eval(s, u, e) * f)
            nxt.append(u)
        rest = nxt
    return WittBasis(pairs, rest)


def restrict(s: SymplecticSpace, u: Subspace) -> SymplecticSpace:
    """Form restricted to ``u``, in the coordinates of u's echelon basis."""
    if u.ambient != s.n:
        raise ValueError("subspace not in this space")
    F = s.field
    B = u.basis
    return SymplecticSpace(F, F.reduce(F.reduce(B @ s.gram) @ B.T))
