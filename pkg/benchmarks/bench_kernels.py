"""Compare the compiled and pure-Python enumeration kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Each case runs both kernels on the same polygon and checks that they agree
before reporting timings.
"""

from __future__ import annotations

import argparse
import json
import statistics
import time

from troplanar import _kernel_py
from troplanar._geometry import prepare
from troplanar.lattice import LatticePolygon

try:
    from troplanar import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

CASES = [
    ("count", "genus-1 hexagon", [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]),
    ("count", "2x3 rectangle", [(0, 0), (2, 0), (2, 3), (0, 3)]),
    ("count", "quartic triangle", [(0, 0), (4, 0), (0, 4)]),
    ("scan", "quartic triangle", [(0, 0), (4, 0), (0, 4)]),
    ("scan", "genus-4 polygon", [(0, 0), (2, 0), (4, 6)]),
]


def run(kernel, op: str, cfg):
    if op == "count":
        return kernel.count(cfg)
    seen: set = set()
    n = kernel.scan_skeletons(cfg, seen, None, lambda code, tris, i: True)
    return n, len(seen)


def timed(kernel, op, cfg, repeat: int):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = run(kernel, op, cfg)
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for op, name, pts in CASES:
        cfg = prepare(LatticePolygon.from_points(pts))
        py_res, py_t = timed(_kernel_py, op, cfg, args.repeat)
        row = {"case": f"{op}: {name}", "result": py_res, "python_s": py_t}
        if _compiled is not None:
            c_res, c_t = timed(_compiled, op, cfg, args.repeat)
            assert c_res == py_res, (name, c_res, py_res)
            row |= {"compiled_s": c_t, "speedup": py_t / c_t if c_t else float("inf")}
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2, default=str))
        return
    print(f"{'case':34} {'result':>16} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for r in rows:
        comp = f"{r['compiled_s']:11.4f} {r['speedup']:8.1f}" if "compiled_s" in r else f"{'n/a':>11} {'n/a':>8}"
        print(f"{r['case']:34} {str(r['result']):>16} {r['python_s']:10.4f} {comp}")


if __name__ == "__main__":
    main()
