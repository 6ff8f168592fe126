"""Compare the compiled kernel with the pure-Python fallback.

Each workload runs in a fresh interpreter with ``YMBV_PURE`` set, so the
backend is selected exactly as at import. Prints a table of best-of-N wall
times and the speedup; ``--json`` writes the raw numbers.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "scalar_ops": """
import random
from fractions import Fraction
from ymbv.kernel import GaussianRational as G
rng = random.Random(0)
xs = [G(Fraction(rng.randint(-50, 50), rng.randint(1, 20)), Fraction(rng.randint(-50, 50), rng.randint(1, 20))) for _ in range(400)]
def run():
    acc = G(0)
    for a in xs:
        for b in xs[:100]:
            acc = acc + a * b - b
    return acc
""",
    "sparse_rref": """
import random
from fractions import Fraction
from ymbv.kernel import GaussianRational as G, sparse_rref
rng = random.Random(1)
n = 60
rows = [{c: G(rng.randint(-9, 9), rng.randint(-3, 3)) for c in range(n + 1) if rng.random() < 0.15} for _ in range(n + 10)]
def run():
    return sparse_rref([dict(r) for r in rows], n)
""",
    "solve_h": """
from ymbv.ym_complex import load_structure_tables, solve_h
tables = load_structure_tables()
def run():
    return solve_h(tables)
""",
    "theta3_solve": """
from ymbv.bv_infinity import YMStructure
from ymbv.ym_complex import load_structure_tables, solve_h
tables = solve_h(load_structure_tables())
def run():
    YMStructure(tables).build(3)
""",
}

RUNNER = """
import time, json
from ymbv import kernel
{setup}
best = None
for _ in range({repeat}):
    t0 = time.perf_counter()
    run()
    dt = time.perf_counter() - t0
    best = dt if best is None else min(best, dt)
print(json.dumps({{"backend": kernel.BACKEND, "seconds": best}}))
"""


def measure(name: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ, YMBV_PURE="1" if pure else "0")
    code = RUNNER.format(setup=WORKLOADS[name], repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", choices=sorted(WORKLOADS), action="append")
    ap.add_argument("--json", help="write results here")
    args = ap.parse_args(argv)
    results = []
    print(f"{'workload':<14} {'cython':>10} {'python':>10} {'speedup':>8}")
    for name in args.only or list(WORKLOADS):
        fast = measure(name, False, args.repeat)
        slow = measure(name, True, args.repeat)
        if fast["backend"] != "cython":
            print(f"{name:<14} compiled kernel not built; both runs used {fast['backend']}")
        speed = slow["seconds"] / fast["seconds"] if fast["seconds"] else float("inf")
        print(f"{name:<14} {fast['seconds']:>9.3f}s {slow['seconds']:>9.3f}s {speed:>7.2f}x")
        results.append({"workload": name, "compiled": fast, "pure": slow, "speedup": speed})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
