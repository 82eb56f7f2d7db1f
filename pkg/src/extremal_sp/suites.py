"""Named verification suites run by the command line tool."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .algebra import StructureLieAlgebra, extremal_form
from .extremal import check_condition_A, condition_B_witness, exp_check, is_extremal, sl2_extremal_points
from .geometry import (Geometry, build_geometry, classify_triple, geometry_health, line_meets_perp,
                       polar_span_check)
from .linalg import rank
from .recognition import NotProportional, RecognitionError, nonsplit_check, product_gamma, recognize
from .symplectic import SymplecticSpace, f_eval
from .tensor_model import model_extremal_form, pure, sp_identification

SUITES = ("tensor", "extremal", "geometry", "triples", "uniqueness", "recognition")


@dataclass
class SuiteSpec:
    name: str
    seed: int = 0
    budget: int = 5000
    samples: int = 20
    space: SymplecticSpace | None = None   # set when the algebra is a known model


@dataclass
class SuiteContext:
    L: StructureLieAlgebra
    spec: SuiteSpec
    rng: np.random.Generator
    _geom: Geometry | None = None
    _table: object = None
    checks: list = dc_field(default_factory=list)

    @property
    def geom(self) -> Geometry:
        if self._geom is None:
            self._geom = build_geometry(self.L, budget=self.spec.budget)
        return self._geom

    @property
    def table(self):
        if self._table is None:
            g = self.geom
            R = g.rep_matrix()
            self._table = extremal_form(self.L, list(R)) if g.spans else extremal_form(self.L)
        return self._table

    def run(self, name: str, fn: Callable[[], object]):
        t0 = time.perf_counter()
        try:
            res = fn()
            passed, detail = (res if isinstance(res, tuple) else (bool(res), None))
            err = None
        except Exception as e:  # a crashing check is a failed check
            passed, detail, err = False, None, f"{type(e).__name__}: {e}"
        entry = {"name": name, "pass": bool(passed), "seconds": round(time.perf_counter() - t0, 4)}
        if detail is not None:
            entry["detail"] = detail
        if err is not None:
            entry["error"] = err
        self.checks.append(entry)


def _sample_points(ctx: SuiteContext, k: int) -> list[int]:
    n = ctx.geom.n_points
    if n <= k:
        return list(range(n))
    return sorted(int(i) for i in ctx.rng.choice(n, size=k, replace=False))


def suite_tensor(ctx: SuiteContext):
    L = ctx.L
    ctx.run("jacobi identity", L.jacobi_ok)
    ctx.run("extremal generators are extremal",
            lambda: all(is_extremal(L, g).extremal for g in L.extremal_generators))
    sp = ctx.spec.space
    if sp is not None and sp.is_nondegenerate:
        def ident():
            r = sp_identification(sp)
            return r["equal"], {"dim_sf": r["dim_sf"], "dim_sp": r["dim_sp"]}
        ctx.run("S_f equals sp(V,f)", ident)

        def closed_form():
            F = sp.field
            for _ in range(ctx.spec.samples):
                v, w = F.random_array(ctx.rng, sp.n), F.random_array(ctx.rng, sp.n)
                if not (F.nonzero_mask(v).any() and F.nonzero_mask(w).any()):
                    continue
                a, b = pure(sp, v), pure(sp, w)
                fv = f_eval(sp, v, w)
                if model_extremal_form(a, b) != F.mul(fv, fv):
                    return False
            return True
        ctx.run("trace form equals f(v,w)^2 on pure tensors", closed_form)


def suite_extremal(ctx: SuiteContext):
    L, F = ctx.L, ctx.L.field
    pts = ctx.geom.reps
    idx = _sample_points(ctx, ctx.spec.samples)

    def exps():
        for i in idx:
            if ctx.geom.is_sandwich(i):
                continue
            lam = F.random(ctx.rng, nonzero=True)
            if not exp_check(L, pts[i], lam):
                return False
        return True
    ctx.run("exp(x, lambda) is an automorphism", exps)

    def conics():
        for i, j in itertools.combinations(idx, 2):
            if ctx.geom.g(i, j) != 0:
                return all(is_extremal(L, u).extremal for u in sl2_extremal_points(L, pts[i], pts[j])), \
                    {"pair": [i, j]}
        return True, {"pair": None}
    ctx.run("sl2 conic points are extremal", conics)

    def cond_a():
        sel = [pts[i] for i in idx]
        rep = check_condition_A(L, sel)
        return rep.passed, rep.details
    ctx.run("condition (A) on sampled points", cond_a)

    def cond_b():
        tried = 0
        for i, j, k in itertools.combinations(idx, 3):
            if L.is_zero(L.bracket(pts[i], pts[j])):
                continue
            tried += 1
            if not condition_B_witness(L, ctx.table, pts[i], pts[j], pts[k]).found:
                return False, {"triple": [i, j, k]}
            if tried >= 4 * ctx.spec.samples:
                break
        return True, {"triples": tried}
    ctx.run("condition (B) witnesses in the base field", cond_b)


def suite_geometry(ctx: SuiteContext):
    g = ctx.geom
    ctx.run("closure finished within budget", lambda: (not g.partial, {"points": g.n_points}))
    ctx.run("points span the algebra", lambda: (g.spans, {"span_dim": g.span_dim, "dim": ctx.L.dim}))
    rad_empty = ctx.table.is_nondegenerate

    def health():
        h = geometry_health(g, rad_empty)
        return h.connected and h.consistent, {"connected": h.connected, "nondegenerate": h.nondegenerate}
    ctx.run("geometry health", health)

    def lines_unique():
        seen = set()
        for ln in g.hyperbolic:
            for pr in itertools.combinations(ln, 2):
                if pr in seen:
                    return False
                seen.add(pr)
        return True, {"hyperbolic_lines": len(g.hyperbolic)}
    ctx.run("two points lie on at most one sl2-line", lines_unique)

    def spans():
        lines = [g.hyperbolic_lines()[k] for k in range(min(len(g.hyperbolic), ctx.spec.samples))]
        return all(polar_span_check(ctx.L, g, ln).passed for ln in lines)
    ctx.run("sl2-lines span planes meeting the points in a conic", spans)

    def polar():
        C = g.commuting
        pairs = [(i, j) for i, j in zip(*np.nonzero(np.triu(C, 1)))
                 if not (g.is_sandwich(i) or g.is_sandwich(j))][: ctx.spec.samples]
        return all(polar_span_check(ctx.L, g, g.polar_line(int(i), int(j))).passed for i, j in pairs), \
            {"checked": len(pairs)}
    if rad_empty:
        ctx.run("polar lines span planes meeting the points in an oval", polar)

    def meets():
        for ln in g.hyperbolic_lines()[: ctx.spec.samples]:
            for i in _sample_points(ctx, 10):
                line_meets_perp(g, i, ln)
        return True
    ctx.run("each sl2-line meets a perp in one point", meets)


def find_symplectic_triple(L: StructureLieAlgebra, geom: Geometry):
    """First (x, y, z) with [x,y] != 0, [y,z] != 0, [x,z] = 0, z outside <x,y>."""
    C = geom.commuting
    N = geom.n_points
    pure_pts = [i for i in range(N) if not geom.is_sandwich(i)]
    for x in pure_pts:
        for y in pure_pts:
            if C[x, y]:
                continue
            for z in pure_pts:
                if z == x or not C[x, z] or C[y, z]:
                    continue
                if rank(L.field, np.array([geom.reps[x], geom.reps[y], geom.reps[z]])) == 3:
                    return geom.reps[x], geom.reps[y], geom.reps[z]
    return None


def suite_triples(ctx: SuiteContext):
    def run():
        t = find_symplectic_triple(ctx.L, ctx.geom)
        if t is None:
            return False, {"reason": "no symplectic triple"}
        tc = classify_triple(ctx.L, None, *t)
        return tc.table_verified, {"kind": tc.kind.name, "dim": tc.dim, "center_dim": tc.center_dim,
                                   "identities": tc.identities}
    ctx.run("symplectic triple table", run)


def suite_uniqueness(ctx: SuiteContext):
    L, F = ctx.L, ctx.L.field
    units = [F(2), F(3)] if not F.is_finite else [u for u in F.units() if u != 1][:3]

    def recover():
        got = []
        for gam in units:
            res = product_gamma(F, L.C, F.reduce(L.C * gam), ctx.geom.reps[:40])
            if res.gamma != gam:
                return False
            got.append(F.scalar_to_json(res.gamma))
        return True, {"gammas": got}
    ctx.run("product scalar recovered", recover)

    def negative():
        C2 = F.reduce(L.C * units[0])
        nz = np.argwhere(F.nonzero_mask(C2))
        i, j, k = map(int, nz[0])
        C2 = C2.copy()
        C2[i, j, k] = F.add(C2[i, j, k], 1)
        C2[j, i, k] = F.neg(C2[i, j, k])
        try:
            product_gamma(F, L.C, C2)
        except NotProportional:
            return True
        return False
    ctx.run("perturbed product is rejected", negative)


def suite_recognition(ctx: SuiteContext):
    def run():
        try:
            rep = recognize(ctx.L, budget=ctx.spec.budget, geom=ctx.geom)
        except RecognitionError as e:
            return False, {"error": str(e)}
        return rep.passed, {"m": rep.m, "gamma": ctx.L.field.scalar_to_json(rep.gamma),
                            "failed": [c["name"] for c in rep.checks if not c["pass"]]}
    ctx.run("recognition", run)

    if not ctx.table.is_nondegenerate:
        def structure():
            r = nonsplit_check(ctx.L)
            return r["L_splits_over_N"], r
        ctx.run("L splits over its radical ideal N (optional)", structure)


_SUITE_FUNCS = {"tensor": suite_tensor, "extremal": suite_extremal, "geometry": suite_geometry,
                "triples": suite_triples, "uniqueness": suite_uniqueness, "recognition": suite_recognition}


def run_suite(L: StructureLieAlgebra, spec: SuiteSpec) -> dict:
    ctx = SuiteContext(L, spec, np.random.default_rng(spec.seed))
    names = SUITES if spec.name == "all" else (spec.name,)
    if spec.name != "all" and spec.name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {spec.name!r}")
    jac = L.jacobi_violations()
    ctx.checks.append({"name": "jacobi identity (structure table)", "pass": not jac and L.antisymmetry_ok(),
                       **({"violations": [list(t) for t in jac[:5]]} if jac else {})})
    if jac:
        return {"suite": spec.name, "pass": False, "checks": ctx.checks}
    for n in names:
        _SUITE_FUNCS[n](ctx)
    return {"suite": spec.name, "pass": all(c["pass"] for c in ctx.checks), "checks": ctx.checks}
