"""Benchmark: compiled pivot kernel vs the pure-Python fallback.

Times raw pivot walks on both tableau backends in-process, then re-runs a
set of real workloads (feasibility programs, vertex enumeration, a section
search) in one subprocess per backend, since the backend is chosen at import
time. Usage:

    python3 benchmarks/bench_kernel.py
"""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from polysteer._kernel import PureTableau

try:
    from polysteer._kernel import _speedups

    CompiledTableau = _speedups.Tableau
except ImportError:
    CompiledTableau = None


def build_pivot_walk(seed, nrows, ncols, steps):
    """A Bland-style walk on a random tableau; mirrors simplex access patterns."""
    rng = random.Random(seed)
    rows = [
        [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(ncols)]
        for _ in range(nrows)
    ]
    probe = PureTableau(rows)
    pivots = []
    for _ in range(steps):
        enter = next(
            (j for j in range(ncols) if probe.sign(nrows - 1, j) < 0), None
        )
        if enter is None:
            break
        best = None
        leave = None
        for i in range(nrows - 1):
            if probe.sign(i, enter) > 0:
                ratio = probe.entry(i, ncols - 1) / probe.entry(i, enter)
                if best is None or ratio < best:
                    best, leave = ratio, i
        if leave is None:
            break
        probe.pivot(leave, enter)
        pivots.append((leave, enter))
    return rows, pivots


def time_walk(factory, rows, pivots, repeats=3):
    best = None
    for _ in range(repeats):
        t = factory(rows)
        t0 = time.perf_counter()
        for r, c in pivots:
            t.pivot(r, c)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


WORKLOAD_SCRIPT = r"""
import json, time
from fractions import Fraction as F
from polysteer._kernel import BACKEND
from polysteer.space import StateSpace
from polysteer.cone import cone_from_rays
from polysteer.composite import BipartiteState
from polysteer.steering import affine_section_search, decide_steering, order_interval_vertices

cube = StateSpace(cone_from_rays([(x, y, z, 1) for x in (1, -1) for y in (1, -1) for z in (1, -1)], 4), (0, 0, 0, 1))
hexs = StateSpace(cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, 1, 1), (-1, 0, 1), (0, -1, 1), (1, -1, 1)], 3), (0, 0, 1))
omega = BipartiteState(cube, hexs, ((1, 0, -1, 0), (0, 1, 1, 0), (0, 0, 0, 1)))

out = {"backend": BACKEND}
t0 = time.perf_counter()
order_interval_vertices(cube.cone, (0, 0, 0, 1))
out["interval vertices (cube)"] = time.perf_counter() - t0
t0 = time.perf_counter()
decide_steering(omega, depth=3)
out["steering decision, depth 3"] = time.perf_counter() - t0
t0 = time.perf_counter()
affine_section_search(omega)
out["affine section search"] = time.perf_counter() - t0
print(json.dumps(out))
"""


def run_workloads(pure):
    env = dict(os.environ)
    if pure:
        env["POLYSTEER_PURE"] = "1"
    else:
        env.pop("POLYSTEER_PURE", None)
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD_SCRIPT],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(res.stdout)


def main():
    print(f"{'pivot walk':<32}{'pure':>10}{'compiled':>12}{'speedup':>10}")
    for name, args in [
        ("40x80, dense", (11, 40, 80, 60, 3)),
        ("80x160, dense", (12, 80, 160, 100, 1)),
    ]:
        rows, pivots = build_pivot_walk(*args[:4])
        pure_t = time_walk(PureTableau, rows, pivots, repeats=args[4])
        if CompiledTableau is None:
            print(f"{name:<32}{pure_t:>9.3f}s{'n/a':>12}{'n/a':>10}")
            continue
        comp_t = time_walk(CompiledTableau, rows, pivots, repeats=args[4])
        print(f"{name:<32}{pure_t:>9.3f}s{comp_t:>11.3f}s{pure_t/comp_t:>9.1f}x")

    pure_res = run_workloads(pure=True)
    comp_res = run_workloads(pure=False)
    if comp_res["backend"] != "compiled":
        print("\ncompiled backend unavailable; end-to-end comparison skipped")
        return
    print(f"\n{'end-to-end workload':<32}{'pure':>10}{'compiled':>12}{'speedup':>10}")
    for key in pure_res:
        if key == "backend":
            continue
        p, c = pure_res[key], comp_res[key]
        print(f"{key:<32}{p:>9.3f}s{c:>11.3f}s{p/c:>9.1f}x")


if __name__ == "__main__":
    main()
