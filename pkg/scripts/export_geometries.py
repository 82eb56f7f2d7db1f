"""Write JSON and DOT exports of the sl2-geometry for a few small models."""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from extremal_sp.fields import FieldSpec
from extremal_sp.geometry import build_geometry
from extremal_sp.tensor_model import sp3_algebra, sp_algebra


@dataclass(frozen=True)
class Target:
    name: str
    p: int
    pairs: int = 0          # 0 selects the sp3 example algebra
    dot: bool = True


TARGETS = (Target("sl2_f3", 3, 1), Target("sp4_f3", 3, 2), Target("sp4_f5", 5, 2, dot=False),
           Target("sp6_f3", 3, 3, dot=False), Target("sp3_f3", 3, 0))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="geometry_exports")
    ap.add_argument("--budget", type=int, default=5000)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for t in TARGETS:
        F = FieldSpec.prime(t.p)
        L = sp_algebra(F, t.pairs) if t.pairs else sp3_algebra(F).algebra
        g = build_geometry(L, budget=args.budget)
        (out / f"{t.name}.json").write_text(json.dumps(g.to_json(), indent=1) + "\n", encoding="utf-8")
        if t.dot:
            (out / f"{t.name}.dot").write_text(g.to_dot(), encoding="utf-8")
        sandwiches = sum(g.is_sandwich(i) for i in range(g.n_points))
        print(f"{t.name}: {g.n_points} points, {len(g.hyperbolic)} sl2-lines, {len(g.polar_lines())} polar lines, "
              f"{sandwiches} sandwich points{' (partial)' if g.partial else ''}")


if __name__ == "__main__":
    main()
