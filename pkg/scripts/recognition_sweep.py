"""Time recognition of scrambled symplectic models over several fields.

    python3 scripts/recognition_sweep.py --primes 3 5 7 --pairs 1 2 --trials 5
    python3 scripts/recognition_sweep.py --square 3 --pairs 2 --trials 1   # slow: minutes
"""
from __future__ import annotations

import argparse
import json
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from extremal_sp.fields import FieldSpec
from extremal_sp.recognition import RecognitionError, recognize, scramble
from extremal_sp.tensor_model import sp_algebra

log = logging.getLogger("sweep")


@dataclass
class SweepConfig:
    primes: list[int] = field(default_factory=lambda: [3, 5])
    squares: list[int] = field(default_factory=list)
    pairs: list[int] = field(default_factory=lambda: [1, 2])
    trials: int = 3
    seed: int = 0
    budget: int = 20000
    polar_sample: int = 300


def run(cfg: SweepConfig) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    fields = [FieldSpec.prime(p) for p in cfg.primes] + [FieldSpec.prime_square(p) for p in cfg.squares]
    rows = []
    for F in fields:
        for m in cfg.pairs:
            L = sp_algebra(F, m)
            for t in range(cfg.trials):
                L2, _, scale = scramble(L, rng)
                t0 = time.perf_counter()
                try:
                    rep = recognize(L2, budget=cfg.budget, polar_sample=cfg.polar_sample)
                    ok, err = rep.passed, None
                except RecognitionError as e:
                    ok, err = False, str(e)
                dt = time.perf_counter() - t0
                row = {"field": str(F), "m": m, "trial": t, "passed": ok, "seconds": round(dt, 3),
                       "scale": F.scalar_to_json(scale)}
                if err:
                    row["error"] = err
                log.info("%s m=%d trial %d: %s in %.2fs", F, m, t, "ok" if ok else err, dt)
                rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="*", default=[3, 5])
    ap.add_argument("--square", dest="squares", type=int, nargs="*", default=[])
    ap.add_argument("--pairs", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = SweepConfig(primes=args.primes, squares=args.squares, pairs=args.pairs, trials=args.trials,
                      seed=args.seed)
    rows = run(cfg)
    out = {"config": asdict(cfg), "results": rows}
    text = json.dumps(out, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r["passed"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
