"""Recompute the reference values in tests/oracles.py and freeze them to JSON."""
import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402

if __name__ == "__main__":
    t0 = time.perf_counter()
    values = oracles.all_values(include_slow=True)
    out = ROOT / "tests" / "data" / "oracle_values.json"
    out.write_text(json.dumps(values, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(json.dumps(values, indent=2, sort_keys=True))
    print(f"wrote {out} in {time.perf_counter() - t0:.1f}s")
