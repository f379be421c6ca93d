"""Time each kernel on the numba path and on the pure-numpy path.

Each path runs in its own interpreter because the switch is read at import
time.  Outputs are hashed so the two paths can be compared for equality.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, sys, time
import numpy as np
from e7theta import _accel, kernels, weyl

def digest(*arrays):
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]

def timed(fn, repeat):
    fn()  # warm-up (includes jit compilation on the numba path)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out

repeat = int(sys.argv[1])
bases3 = kernels.symplectic_bases(3)
sample = np.ascontiguousarray(bases3[::10])
gens = weyl.e7_data().gen_perms
cases = {
    "symplectic_bases(g=3)": lambda: (kernels.symplectic_bases(3),),
    "aronhold_lift(g=3, 145152 bases)": lambda: kernels.aronhold_lift(sample, 3),
    "count_aronhold_tuples(g=2)": lambda: (np.array([kernels.count_aronhold_tuples(2)]),),
    "weyl_closure(W(E7))": lambda: kernels.weyl_closure(gens, weyl.DEFAULT_GROUP_BUDGET)[:2],
}
out = {"numba": _accel.use_numba(), "cases": {}}
for name, fn in cases.items():
    reps = 1 if name.startswith("weyl") else repeat
    sec, res = timed(fn, reps)
    out["cases"][name] = {"seconds": sec, "digest": digest(*res)}
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("E7THETA_DISABLE_NUMBA", None)
    if disable:
        env["E7THETA_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if not fast["numba"]:
        print("numba is not importable; both columns use numpy")
    print(f"{'kernel':36s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}  same")
    for name, a in fast["cases"].items():
        b = slow["cases"][name]
        same = a["digest"] == b["digest"]
        print(f"{name:36s} {a['seconds']:10.3f} {b['seconds']:10.3f} {b['seconds'] / a['seconds']:8.1f}  {same}")


if __name__ == "__main__":
    main()
