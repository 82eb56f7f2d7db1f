"""Rebuild (V, f) and an explicit isomorphism onto the model from an abstract algebra.

Pipeline: close the sl2-geometry from the extremal generators, compute the
extremal form, peel a hyperbolic frame, fix the relative scalings with gauge
points, propagate preimages of the model basis through brackets, then
coordinatise every extremal point and verify the point map and the linear map.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (StructureLieAlgebra, center, extremal_form, find_complement, ideal_generated, inverse,
                      random_invertible, subalgebra, transport)
from .fields import FieldSpec
from .geometry import Geometry, build_geometry, geometry_health
from .linalg import rank, row_reduce
from .symplectic import SymplecticSpace, standard_space
from .tensor_model import sf_algebra, sf_coords, sf_index


class RecognitionError(ValueError):
    pass


class HypothesisFailure(RecognitionError):
    pass


class NotProportional(RecognitionError):
    def __init__(self, detail: str = ""):
        super().__init__("not proportional" + (f": {detail}" if detail else ""))


# -- product uniqueness ----------------------------------------------------------

@dataclass
class GammaResult:
    gamma: object
    verified: bool
    pair: tuple


def product_gamma(F: FieldSpec, C1: np.ndarray, C2: np.ndarray, shared=None) -> GammaResult:
    """Scalar ``gamma`` with ``[a,b]_2 = gamma [a,b]_1``.

    ``gamma`` is read off one pair of ``shared`` elements that do not commute
    under the first product, then checked on every basis pair.
    """
    d = C1.shape[0]
    L1, L2 = StructureLieAlgebra(F, C1), StructureLieAlgebra(F, C2)
    pts = list(shared) if shared is not None else [L1.basis_vector(i) for i in range(d)]
    gamma, pair = None, None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            b1 = L1.bracket(pts[i], pts[j])
            b2 = L2.bracket(pts[i], pts[j])
            z1, z2 = L1.is_zero(b1), L2.is_zero(b2)
            if z1 != z2:
                raise NotProportional(f"commuting relation differs on pair ({i},{j})")
            if z1:
                continue
            if gamma is None:
                k = int(np.flatnonzero(F.nonzero_mask(b1))[0])
                gamma = F.div(b2[k], b1[k])
                pair = (i, j)
            if F.nonzero_mask(F.reduce(b2 - b1 * gamma)).any():
                raise NotProportional(f"pair ({i},{j})")
    if gamma is None:
        raise NotProportional("no noncommuting pair")
    if F.nonzero_mask(F.reduce(C2 - C1 * gamma)).any():
        raise NotProportional("structure constants differ beyond a scalar")
    return GammaResult(gamma, True, pair)


# -- frame --------------------------------------------------------------------------

@dataclass
class HyperbolicFrame:
    field: FieldSpec
    point_pairs: list            # (i_k, j_k) point indices
    xs: list                     # reps, g(x_k, y_k) = 1
    ys: list
    gauge_points: list = dc_field(default_factory=list)   # point index for k = 2..m
    gauge_reps: list = dc_field(default_factory=list)
    preimages: np.ndarray | None = None                   # rows: preimage of model basis

    @property
    def m(self) -> int:
        return len(self.xs)


def _frame_gram_ok(F: FieldSpec, G: np.ndarray, xs, ys) -> bool:
    m = len(xs)
    vecs = list(xs) + list(ys)
    for a in range(2 * m):
        for b in range(2 * m):
            val = F.reduce(vecs[a] @ F.reduce(G @ vecs[b]))
            want = 1 if (a < m and b == a + m) or (b < m and a == b + m) else 0
            if val != want:
                return False
    return True


def find_frame(L: StructureLieAlgebra, geom: Geometry, gram: np.ndarray, gauge: bool = True) -> HyperbolicFrame:
    """Greedy peeling of noncommuting pairs, then gauge fixing and preimage propagation."""
    F = L.field
    C = geom.commuting
    avail = np.ones(geom.n_points, dtype=bool)
    for i in range(geom.n_points):
        if geom.is_sandwich(i):
            avail[i] = False
    pairs, xs, ys = [], [], []
    while avail.any():
        idx = np.flatnonzero(avail)
        found = None
        for i in idx:
            cand = np.flatnonzero(avail & ~C[i])
            if cand.size:
                found = (int(i), int(cand[0]))
                break
        if found is None:
            raise RecognitionError("degenerate geometry")
        i, j = found
        x = geom.reps[i]
        gxy = F.reduce(x @ F.reduce(gram @ geom.reps[j]))
        if gxy == 0:
            raise HypothesisFailure("noncommuting frame pair with g = 0 (extremal line present)")
        y = F.reduce(geom.reps[j] * F.inv(gxy))
        pairs.append((i, j))
        xs.append(x)
        ys.append(y)
        avail &= C[i] & C[j]
    frame = HyperbolicFrame(F, pairs, xs, ys)
    if not _frame_gram_ok(F, gram, xs, ys):
        raise RecognitionError("frame Gram pattern violated")
    if gauge:
        fix_gauge(L, geom, gram, frame)
        propagate_preimages(L, frame, gram)
    return frame


def _gauge_candidates(F: FieldSpec, geom: Geometry, gram: np.ndarray, frame: HyperbolicFrame, k: int) -> list[int]:
    """Points ``<a e_1 + b e_k>`` with ``a b != 0``, recognised through frame values of g."""
    R = geom.rep_matrix()
    gv = lambda v: F.reduce(R @ F.reduce(gram @ v))  # noqa: E731
    ok = F.nonzero_mask(gv(frame.ys[0])) & F.nonzero_mask(gv(frame.ys[k]))
    ok &= ~F.nonzero_mask(gv(frame.xs[0])) & ~F.nonzero_mask(gv(frame.xs[k]))
    for j in range(frame.m):
        if j in (0, k):
            continue
        ok &= ~F.nonzero_mask(gv(frame.xs[j])) & ~F.nonzero_mask(gv(frame.ys[j]))
    return [int(i) for i in np.flatnonzero(ok)]


def _lex_key(F: FieldSpec, v: np.ndarray):
    return tuple(str(F.scalar_to_json(c)) if F.kind != "prime" else int(c) for c in v)


def fix_gauge(L: StructureLieAlgebra, geom: Geometry, gram: np.ndarray, frame: HyperbolicFrame):
    """Rescale pair k so a gauge point on the polar line through x_1, x_k balances both sides."""
    F = L.field
    for k in range(1, frame.m):
        cands = _gauge_candidates(F, geom, gram, frame, k)
        if not cands:
            raise RecognitionError(f"no gauge point for frame pair {k + 1}")
        gidx = min(cands, key=lambda i: _lex_key(F, geom.reps[i]))
        r = geom.reps[gidx]
        th1 = F.reduce(r @ F.reduce(gram @ frame.ys[0]))
        thk = F.reduce(r @ F.reduce(gram @ frame.ys[k]))
        s = F.div(thk, th1)
        frame.xs[k] = F.reduce(frame.xs[k] * s)
        frame.ys[k] = F.reduce(frame.ys[k] * F.inv(s))
        frame.gauge_points.append(gidx)
        frame.gauge_reps.append(r)


def propagate_preimages(L: StructureLieAlgebra, frame: HyperbolicFrame, gram: np.ndarray):
    """Preimages of the model basis ``pure(a_i)``, ``sym(a_i, a_j)`` by solving bracket relations."""
    F, m = L.field, frame.m
    n = 2 * m
    model = sf_algebra(standard_space(F, m))
    pos = {ij: t for t, ij in enumerate(sf_index(n))}
    d = len(pos)
    if d != L.dim:
        raise HypothesisFailure(f"dimension {L.dim} differs from m(2m+1) = {d}")
    known: dict[int, np.ndarray] = {}
    for k in range(m):
        known[pos[(k, k)]] = frame.xs[k]
        known[pos[(m + k, m + k)]] = frame.ys[k]
    for k in range(1, m):
        r = frame.gauge_reps[k - 1]
        th = F.reduce(r @ F.reduce(gram @ frame.ys[0]))
        known[pos[(0, k)]] = F.reduce(r * F.inv(th) - frame.xs[0] - frame.xs[k])
    progress = True
    while len(known) < d and progress:
        progress = False
        keys = sorted(known)
        for ai, a in enumerate(keys):
            for b in keys[ai + 1:]:
                c = model.C[a, b]
                supp = [int(t) for t in np.flatnonzero(F.nonzero_mask(c))]
                unk = [t for t in supp if t not in known]
                if len(unk) != 1:
                    continue
                t = unk[0]
                val = L.bracket(known[a], known[b])
                for s in supp:
                    if s != t:
                        val = F.reduce(val - known[s] * c[s])
                known[t] = F.reduce(val * F.inv(c[t]))
                progress = True
    if len(known) < d:
        raise RecognitionError("frame chain gap")
    frame.preimages = np.array([known[t] for t in range(d)], dtype=frame.xs[0].dtype)
    return frame.preimages


# -- coordinates ---------------------------------------------------------------

def coordinatize_point(frame: HyperbolicFrame, gram: np.ndarray, L: StructureLieAlgebra, rep: np.ndarray):
    """Projective coordinates ``u`` (first nonzero entry 1) and ``theta`` with ``rep -> theta pure(u)``.

    Uses ``Q_ii = g(x, pre(pure a_i))`` and ``2 Q_ij = g(x, pre(sym(a_i, a_j)))``,
    which equal ``theta phi_i phi_j`` for the functional ``phi = f(u, .)``.
    """
    F, m = L.field, frame.m
    n = 2 * m
    vals = F.reduce(F.reduce(rep @ gram) @ frame.preimages.T)
    half = F.inv(F(2))
    Q = F.zeros((n, n))
    for t, (i, j) in enumerate(sf_index(n)):
        v = vals[t] if i == j else F.mul(vals[t], half)
        Q[i, j] = v
        Q[j, i] = v
    diag = [i for i in range(n) if Q[i, i] != 0]
    if not diag:
        raise RecognitionError("inconsistency: all squared coordinates vanish")
    phi = Q[diag[0]]
    J = standard_space(F, m).gram
    u = F.matmul(J, phi)  # f(u, a_i) = phi_i  <=>  u = J phi  (J^{-1} = -J)
    nz = int(np.flatnonzero(F.nonzero_mask(u))[0])
    u = F.reduce(u * F.inv(u[nz]))
    phin = F.reduce(-F.matmul(J, u))
    r = diag[0]
    theta = F.div(Q[r, r], F.mul(phin[r], phin[r]))
    if F.nonzero_mask(F.reduce(Q - np.outer(phin, phin) * theta)).any():
        raise RecognitionError("inconsistency: point products are not rank one")
    return u, theta


def reconstruct_space(frame: HyperbolicFrame) -> SymplecticSpace:
    return standard_space(frame.field, frame.m)


# -- isomorphism -----------------------------------------------------------------

@dataclass
class RecognitionReport:
    m: int
    space: SymplecticSpace
    coords: list               # per geometry point, projective vector in F^{2m}
    thetas: list
    psi: np.ndarray            # row map: L coords -> model coords (u -> u @ psi)
    gamma: object
    checks: list
    frame: HyperbolicFrame | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        F = self.space.field
        return {"m": self.m, "gram": F.array_to_json(self.space.gram), "gamma": F.scalar_to_json(self.gamma),
                "psi": F.array_to_json(self.psi), "checks": self.checks, "notes": self.notes}


def _theta_tree(F: FieldSpec, geom: Geometry, gram, U: np.ndarray, root: int, root_theta, J):
    """Solve theta along a BFS tree of the noncommuting graph and verify every edge."""
    N = geom.n_points
    R = geom.rep_matrix()
    G = F.reduce(F.reduce(R @ gram) @ R.T)
    Fu = F.reduce(F.reduce(U @ J) @ U.T)
    F2 = F.reduce(Fu * Fu)
    theta = [None] * N
    theta[root] = root_theta
    adj = ~geom.commuting
    dq = deque([root])
    while dq:
        p = dq.popleft()
        for q in map(int, np.flatnonzero(adj[p])):
            if theta[q] is None:
                theta[q] = F.div(G[p, q], F.mul(theta[p], F2[p, q]))
                dq.append(q)
    if any(t is None for t in theta):
        raise HypothesisFailure("geometry is not connected")
    th = np.array(theta, dtype=R.dtype)
    ok = not F.nonzero_mask(F.reduce(G - F.reduce(np.outer(th, th)) * F2)).any()
    if not ok:
        raise RecognitionError("theta inconsistency")
    return theta


def _check(name: str, passed: bool, **extra) -> dict:
    return {"name": name, "pass": bool(passed), **extra}


def build_isomorphism(L: StructureLieAlgebra, geom: Geometry, frame: HyperbolicFrame, gram: np.ndarray,
                      polar_sample: int | None = None) -> RecognitionReport:
    F, m = L.field, frame.m
    n, d = 2 * m, L.dim
    checks = []
    model = sf_algebra(standard_space(F, m))
    J = standard_space(F, m).gram
    checks.append(_check("dimension m(2m+1)", d == m * (2 * m + 1), m=m, dim=d))
    checks.append(_check("frame gram pattern", _frame_gram_ok(F, gram, frame.xs, frame.ys)))

    P = frame.preimages
    if rank(F, P) != d:
        raise RecognitionError("propagated preimages are not a basis")
    psi_prop = inverse(F, P)
    iso_prop = transport(L, P)
    checks.append(_check("propagated map preserves brackets", np.array_equal(iso_prop.C, model.C)))

    # coordinatise every point
    coords, thetas = [], []
    for r in geom.reps:
        u, th = coordinatize_point(frame, gram, L, r)
        coords.append(u)
        thetas.append(th)
    U = np.array(coords, dtype=coords[0].dtype)

    # agreement with the propagated map's image
    img_ok = True
    for r, u, th in zip(geom.reps, coords, thetas):
        S = sf_coords(F.reduce(np.outer(u, u) * th))
        if F.nonzero_mask(F.reduce(F.matmul(r, psi_prop) - S)).any():
            img_ok = False
            break
    checks.append(_check("coordinates match propagated map", img_ok))

    keys = {tuple(u) for u in coords}
    injective = len(keys) == len(coords)
    if F.is_finite and not geom.partial:
        q = F.order
        total = (q ** n - 1) // (q - 1)
        checks.append(_check("point map is a bijection", injective and len(coords) == total,
                             points=len(coords), projective_points=total))
    else:
        checks.append(_check("point map is injective", injective, points=len(coords)))

    Fu = F.reduce(F.reduce(U @ J) @ U.T)
    perp_ok = np.array_equal(geom.commuting, ~F.nonzero_mask(Fu))
    checks.append(_check("commuting matches f-orthogonality", perp_ok))

    hyp_ok = True
    for ln in geom.hyperbolic:
        W = U[list(ln)]
        if rank(F, W) != 2:
            hyp_ok = False
            break
        if F.reduce(W[0] @ F.reduce(J @ W[1])) == 0:
            hyp_ok = False
            break
        if F.is_finite and not geom.partial and len(ln) != F.order + 1:
            hyp_ok = False
            break
    checks.append(_check("sl2-lines map to hyperbolic 2-spaces", hyp_ok, lines=len(geom.hyperbolic)))

    pol_ok, npol = True, 0
    if not geom.partial:
        C = geom.commuting
        pairs = list(zip(*np.nonzero(np.triu(C, 1))))
        if polar_sample is not None and len(pairs) > polar_sample:
            step = len(pairs) // polar_sample
            pairs = pairs[::step][:polar_sample]
        for i, j in pairs:
            ln = geom.polar_line(int(i), int(j))
            W = U[list(ln.points)]
            npol += 1
            if rank(F, W) != 2 or F.nonzero_mask(F.reduce(F.reduce(W @ J) @ W.T)).any():
                pol_ok = False
                break
            if F.is_finite and len(ln.points) != F.order + 1:
                pol_ok = False
                break
    checks.append(_check("polar lines map to isotropic projective lines", pol_ok, checked=npol))

    # theta along a spanning tree; root = first frame point (direct theta)
    root = frame.point_pairs[0][0]
    tree = _theta_tree(F, geom, gram, U, root, thetas[root], J)
    checks.append(_check("theta tree agrees with direct theta", all(a == b for a, b in zip(tree, thetas))))

    # linear map from a basis of point representatives
    R = geom.rep_matrix()
    _, piv = row_reduce(F, R.T)
    RB = R[piv]
    PsiB = np.array([sf_coords(F.reduce(np.outer(coords[p], coords[p]) * tree[p])) for p in piv], dtype=R.dtype)
    psi = F.matmul(inverse(F, RB), PsiB)
    checks.append(_check("point-defined map equals propagated map", np.array_equal(psi, psi_prop)))

    # gamma: L's product vs the model product pulled back through psi
    pulled = transport(model, psi)
    try:
        gres = product_gamma(F, pulled.C, L.C, [L.basis_vector(i) for i in range(d)])
        gamma = gres.gamma
        checks.append(_check("product proportional", True, gamma=F.scalar_to_json(gamma)))
    except NotProportional as e:
        raise RecognitionError("product not proportional") from e
    # psi[a,b] = gamma [psi a, psi b], so gamma * psi preserves brackets exactly
    psi_final = F.reduce(psi * gamma)
    iso = transport(L, inverse(F, psi_final))
    checks.append(_check("isomorphism after gamma rescaling", np.array_equal(iso.C, model.C)))

    notes = []
    if F.kind == "prime_square":
        notes.append("automorphism assumed trivial")
    return RecognitionReport(m, reconstruct_space(frame), coords, tree, psi_final, gamma, checks, frame, notes)


def recognize(L: StructureLieAlgebra, budget: int = 20000, polar_sample: int | None = 300,
              geom: Geometry | None = None) -> RecognitionReport:
    """Full pipeline from structure constants plus extremal generators."""
    F = L.field
    if not L.extremal_generators:
        raise HypothesisFailure("no extremal generators given")
    if geom is None:
        geom = build_geometry(L, budget=budget)
    if geom.partial:
        raise HypothesisFailure(f"geometry closure exceeded the budget of {budget} points")
    if not geom.spans:
        raise HypothesisFailure(f"extremal points span only {geom.span_dim} of {L.dim} dimensions")
    R = geom.rep_matrix()
    _, piv = row_reduce(F, R.T)
    table = extremal_form(L, [R[p] for p in piv])
    if not table.is_nondegenerate:
        raise HypothesisFailure(f"extremal form is degenerate: radical of dimension {table.radical.dim}")
    health = geometry_health(geom, True)
    if not health.connected:
        raise HypothesisFailure("sl2-geometry is not connected")
    if not health.nondegenerate:
        raise HypothesisFailure("sl2-geometry is degenerate")
    frame = find_frame(L, geom, table.gram)
    return build_isomorphism(L, geom, frame, table.gram, polar_sample=polar_sample)


def nonsplit_check(L: StructureLieAlgebra) -> dict:
    """Optional structure check for an algebra with a degenerate extremal form.

    N is the ideal generated by the radical of the extremal form. Reports
    whether L splits as N plus a subalgebra, and whether the center of N has
    a subalgebra complement inside N. For the 6-dimensional model with a
    1-dimensional center the first holds and the second fails.
    """
    rad = extremal_form(L).radical
    if rad.dim == 0:
        raise HypothesisFailure("extremal form is nondegenerate: there is no radical ideal")
    N = ideal_generated(L, list(rad.basis))
    quotient = find_complement(L, N)
    n_alg, _ = subalgebra(L, list(N.basis))
    z = center(n_alg)
    inner = find_complement(n_alg, z)
    return {"dim_N": N.dim, "dim_center_N": z.dim, "quotient_dim": L.dim - N.dim,
            "L_splits_over_N": quotient.found, "N_nonsplit": z.dim > 0 and not inner.found}


def scramble(L: StructureLieAlgebra, rng: np.random.Generator, scale=None):
    """Random change of basis and random nonzero bracket scalar; returns (L', T, scale)."""
    F = L.field
    T = random_invertible(F, L.dim, rng)
    if scale is None:
        scale = F.random(rng, nonzero=True)
    return transport(L, T, scale), T, scale
