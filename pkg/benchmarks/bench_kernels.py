"""Compare the compiled and pure-Python RK4 kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from cascade_lab import Cascade, Peak, _backend
from cascade_lab.sim import simulate_delayed, simulate_linear, simulate_nonlinear


def cases():
    c4 = Cascade.uniform(4, 1.2, 0.7135, 1.0)
    c8 = Cascade.uniform(8, 1.5, 0.9, 0.5, 0.01)
    r = Peak(5, 2)
    return {
        "linear n=4, 8k steps": lambda b: simulate_linear(c4, r, 80, 0.01, backend=b),
        "linear n=8 feedback, 40k steps": lambda b: simulate_linear(c8, r, 400, 0.01, backend=b),
        "nonlinear n=4, 8k steps": lambda b: simulate_nonlinear(c4, [1.0] * 4, r, 80, 0.01, backend=b),
        "delayed n=4, 8k steps": lambda b: simulate_delayed(c4, [0.2] * 5, r, 80, 0.01, backend=b),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _backend.available()
    print(f"backends: {', '.join(backends)} (default {_backend.BACKEND})")
    print(f"{'case':34s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup  max|diff|")
    for name, fn in cases().items():
        timings, states = {}, {}
        for b in backends:
            timings[b], tr = best_of(lambda: fn(b), args.repeat)
            states[b] = tr.states
        row = f"{name:34s} " + " ".join(f"{timings[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            diff = np.max(np.abs(states["python"] - states["compiled"]))
            row += f"   {timings['python'] / timings['compiled']:6.1f}x  {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
