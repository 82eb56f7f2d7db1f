"""Dense exact linear algebra over a :class:`FieldSpec`.

Arrays are plain numpy arrays (int64 for small prime fields, object otherwise);
the field travels alongside as an explicit argument. :class:`Mat` bundles the two
for callers that want a self-describing value.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import FieldMismatch, FieldSpec


@dataclass(frozen=True)
class Mat:
    field: FieldSpec
    entries: np.ndarray

    @staticmethod
    def of(F: FieldSpec, data) -> "Mat":
        a = F.array(data)
        if a.ndim != 2:
            raise ValueError("Mat must be two-dimensional")
        return Mat(F, a)

    @property
    def shape(self):
        return self.entries.shape


def _is_zero_vec(F: FieldSpec, v: np.ndarray) -> bool:
    if v.dtype != object:
        return not v.any()
    return all(x == 0 for x in v.flat)


def row_reduce(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns."""
    R = np.array(A, copy=True)
    if R.ndim != 2:
        raise ValueError("row_reduce expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    obj = R.dtype == object
    for c in range(cols):
        if r == rows:
            break
        col = R[r:, c]
        nz = np.flatnonzero(F.nonzero_mask(col)) if obj else np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = F.reduce(R[r] * F.inv(R[r, c]))
        colvals = R[:, c].copy()
        colvals[r] = 0
        if obj:
            mask = F.nonzero_mask(colvals)
        else:
            mask = colvals != 0
        if mask.any():
            idx = np.flatnonzero(mask)
            R[idx] = F.reduce(R[idx] - np.outer(colvals[idx], R[r]))
        pivots.append(c)
        r += 1
    return R, pivots


@dataclass(frozen=True)
class Subspace:
    """Row space of ``basis`` (kept in reduced row echelon form) inside F^ambient."""

    field: FieldSpec
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...] = dc_field(default=())

    @staticmethod
    def span(F: FieldSpec, vectors, ambient: int | None = None) -> "Subspace":
        vecs = [np.asarray(v) for v in vectors]
        if ambient is None:
            if not vecs:
                raise ValueError("ambient dimension needed for an empty span")
            ambient = len(vecs[0])
        if not vecs:
            return Subspace(F, ambient, F.zeros((0, ambient)), ())
        A = F.array(np.array(vecs, dtype=object)) if any(v.dtype == object for v in vecs) else F.array(np.array(vecs))
        if A.shape[1] != ambient:
            raise ValueError("ambient dimension mismatch")
        R, piv = row_reduce(F, A)
        return Subspace(F, ambient, R[: len(piv)], tuple(piv))

    @staticmethod
    def zero(F: FieldSpec, ambient: int) -> "Subspace":
        return Subspace(F, ambient, F.zeros((0, ambient)), ())

    @staticmethod
    def full(F: FieldSpec, ambient: int) -> "Subspace":
        return Subspace(F, ambient, F.eye(ambient), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _check(self, other: "Subspace"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.ambient != self.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def residual(self, v) -> np.ndarray:
        """``v`` minus its component along the pivot columns; zero iff ``v`` lies in the span."""
        F = self.field
        v = F.array(np.asarray(v))
        if v.shape != (self.ambient,):
            raise ValueError(f"vector of length {self.ambient} expected")
        if self.dim == 0:
            return v
        c = v[list(self.pivots)]
        return F.reduce(v - c @ self.basis)

    def contains(self, v) -> bool:
        return _is_zero_vec(self.field, self.residual(v))

    def coords(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the echelon basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return self.field.array(np.asarray(v))[list(self.pivots)]

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, list(self.basis) + list(other.basis), self.ambient)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        F = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(F, self.ambient)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        K = kernel(F, stacked.T)
        vecs = [F.reduce(k[: self.dim] @ self.basis) for k in K.basis]
        return Subspace.span(F, vecs, self.ambient)

    def equals(self, other: "Subspace") -> bool:
        self._check(other)
        return self.pivots == other.pivots and bool(np.all(self.basis == other.basis))

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)


def kernel(F: FieldSpec, A: np.ndarray) -> Subspace:
    """Right kernel ``{v : A v = 0}``."""
    A = np.asarray(A)
    rows, cols = A.shape
    R, piv = row_reduce(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    vecs = []
    for fcol in free:
        v = F.zeros(cols)
        v[fcol] = F.one
        for r, pc in enumerate(piv):
            v[pc] = F.neg(R[r, fcol])
        vecs.append(v)
    return Subspace.span(F, vecs, cols)


def rref(m: Mat) -> tuple[Mat, int, Subspace]:
    """Reduced row echelon form, rank and kernel basis of ``m``."""
    F = m.field
    R, piv = row_reduce(F, m.entries)
    return Mat(F, R), len(piv), kernel(F, m.entries)


def rank(F: FieldSpec, A: np.ndarray) -> int:
    return len(row_reduce(F, np.asarray(A))[1])


def solve(F: FieldSpec, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution ``x`` of ``A x = b``, or ``None`` if inconsistent."""
    A = np.asarray(A)
    b = np.asarray(b)
    rows, cols = A.shape
    aug = np.concatenate([A, b.reshape(rows, -1)], axis=1)
    R, piv = row_reduce(F, aug)
    if any(p >= cols for p in piv):
        return None
    nrhs = aug.shape[1] - cols
    x = F.zeros((cols, nrhs))
    for r, pc in enumerate(piv):
        x[pc] = R[r, cols:]
    return x.reshape(cols) if b.ndim == 1 else x


def inverse(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("square matrix expected")
    R, piv = row_reduce(F, np.concatenate([A, F.eye(n)], axis=1))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return R[:, n:]


def subspace_ops(a: Subspace, b: Subspace) -> dict:
    """Sum, intersection and a membership predicate for ``a``."""
    return {"sum": a.sum(b), "intersection": a.intersection(b), "contains": a.contains}


class EchelonBasis:
    """Incrementally grown subspace kept in reduced row echelon form.

    Coordinates of a member vector w.r.t. the rows are just its entries at the
    pivot columns.
    """

    def __init__(self, F: FieldSpec, ambient: int):
        self.F = F
        self.ambient = ambient
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        F = self.F
        v = np.array(v, copy=True)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != 0:
                v = F.reduce(v - c * row)
        return v

    def add(self, v: np.ndarray) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        F = self.F
        r = self.reduce(v)
        nz = np.flatnonzero(F.nonzero_mask(r))
        if nz.size == 0:
            return False
        pc = int(nz[0])
        r = F.reduce(r * F.inv(r[pc]))
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c != 0:
                self.rows[i] = F.reduce(row - c * r)
        pos = int(np.searchsorted(self.pivots, pc))
        self.rows.insert(pos, r)
        self.pivots.insert(pos, pc)
        return True

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return self.F.zeros((0, self.ambient))
        return np.array(self.rows, dtype=self.rows[0].dtype)

    def subspace(self) -> Subspace:
        return Subspace(self.F, self.ambient, self.matrix(), tuple(self.pivots))
