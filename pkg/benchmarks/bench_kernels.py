"""Time the hot kernels with numba enabled and with the pure-Python fallback.

Each backend runs in its own interpreter because the choice is made at import
time from CTXHARVEST_DISABLE_NUMBA.  Results from both runs are compared so a
speed-up never hides a numerical difference.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time, logging
import numpy as np
logging.disable(logging.WARNING)
from ctxharvest import _accel, numkernel as nk, matcore as mc, lpcf, ctxscen as cs
from ctxharvest import sweep as sw

repeat = int(sys.argv[1])
rng = np.random.default_rng(7)
z = (rng.uniform(-8, 8, 4000) + 1j * rng.uniform(-8, 8, 4000))
herm = []
for _ in range(400):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    herm.append(a + a.conj().T)
M = cs.incidence(cs.PENTAGRAM_CONTEXTS, 5).astype(float)
models = []
for _ in range(200):
    w = rng.dirichlet(np.ones(32))
    models.append(M @ w)
cfg = sw.with_overrides(sw.preset("figure1"), omega_grid=sw.OmegaGrid(0, 4, 11))

def timed(fn):
    fn()  # warm-up (includes JIT compilation when numba is active)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter(); out = fn(); best = min(best, time.perf_counter() - t)
    return best, out

res = {"backend": _accel.backend()}
t, w = timed(lambda: nk.faddeeva_array(z))
res["faddeeva_4000"] = t; res["faddeeva_checksum"] = float(np.sum(np.abs(w)))
t, ev = timed(lambda: [mc.eig_hermitian(h) for h in herm])
res["jacobi_400x6"] = t; res["jacobi_checksum"] = float(sum(e.sum() for e in ev))
t, cf = timed(lambda: [lpcf.solve_ncf(M, v).objective_value for v in models])
res["simplex_200"] = t; res["simplex_checksum"] = float(sum(cf))
t, rows = timed(lambda: sw.run_sweep(cfg))
res["sweep_88_rows"] = t; res["sweep_checksum"] = float(sum(r.delta_cf_over_lambda2 for r in rows))
print(json.dumps(res))
"""

KERNELS = ("faddeeva_4000", "jacobi_400x6", "simplex_200", "sweep_88_rows")


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env["CTXHARVEST_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args(argv)
    t0 = time.perf_counter()
    fast = run(False, a.repeat)
    slow = run(True, a.repeat)
    print(f"{'kernel':<16}{fast['backend']:>12}{slow['backend']:>12}{'speed-up':>10}")
    for k in KERNELS:
        print(f"{k:<16}{fast[k]:>12.4f}{slow[k]:>12.4f}{slow[k] / fast[k]:>10.1f}")
    worst = 0.0
    for k in fast:
        if k.endswith("checksum"):
            worst = max(worst, abs(fast[k] - slow[k]) / max(abs(slow[k]), 1e-300))
    print(f"max relative checksum difference: {worst:.2e}")
    print(f"total wall time {time.perf_counter() - t0:.1f} s")
    return 0 if worst < 1e-10 else 1


if __name__ == "__main__":
    sys.exit(main())
