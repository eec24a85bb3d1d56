#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python fallback.

Times the scalar hot kernels and the capacity integrals that sit on top of
them, and reports the speedup plus the worst relative disagreement between
the two backends. Run from the repo root:

    python benchmarks/benchmark_kernels.py [--repeat N]
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from ris_secrecy import kernels
from ris_secrecy.secrecy import Link, Model, SystemParams, avg_capacity


def _time_scalar(fn, xs, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for x in xs:
            fn(x)
        best = min(best, time.perf_counter() - t0)
    return best


SCALAR_CASES = [
    ("bessel_k0", [float(x) for x in np.logspace(-6, 2.8, 20000)]),
    ("hyp2f1_special", [float(x) for x in np.linspace(-1.0, 0.99999, 20000)]),
    ("erf", [float(x) for x in np.linspace(-6.0, 6.0, 50000)]),
    ("mgf_double_rayleigh", [float(x) for x in np.logspace(-3, 4, 20000)]),
    ("mgf_triple_cascade", [float(x) for x in np.logspace(-3, 4, 300)]),
]

CAPACITY_CASES = [
    ("avg_capacity v2v", SystemParams(model=Model.V2V_RIS_AP)),
    ("avg_capacity relay", SystemParams(model=Model.VANET_RIS_RELAY, r_s=10.0)),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best of)")
    args = parser.parse_args()

    if not kernels.compiled_available():
        print("compiled extension not available; build it with "
              "`python setup.py build_ext --inplace` first")
        return 1

    from ris_secrecy import _kernels, _kernels_py

    print(f"{'kernel':<24} {'compiled':>12} {'python':>12} {'speedup':>9} {'max rel diff':>14}")
    print("-" * 75)
    for name, xs in SCALAR_CASES:
        fc = getattr(_kernels, name)
        fp = getattr(_kernels_py, name)
        tc = _time_scalar(fc, xs, args.repeat)
        tp = _time_scalar(fp, xs, args.repeat)
        diff = 0.0
        for x in xs[:: max(1, len(xs) // 500)]:
            a, b = fc(x), fp(x)
            if b != 0.0:
                diff = max(diff, abs(a - b) / abs(b))
        per_call = tc / len(xs) * 1e9
        print(f"{name:<24} {tc*1e3:>10.2f}ms {tp*1e3:>10.2f}ms {tp/tc:>8.1f}x {diff:>13.2e}"
              f"   ({per_call:.0f} ns/call compiled)")

    for label, params in CAPACITY_CASES:
        results = {}
        times = {}
        for backend in ("compiled", "python"):
            kernels.use_backend(backend)
            best = np.inf
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                val = avg_capacity(params, Link.DESTINATION)
                best = min(best, time.perf_counter() - t0)
            results[backend] = val
            times[backend] = best
        kernels.use_backend("compiled")
        diff = abs(results["compiled"] - results["python"]) / abs(results["python"])
        print(f"{label:<24} {times['compiled']*1e3:>10.2f}ms {times['python']*1e3:>10.2f}ms "
              f"{times['python']/times['compiled']:>8.1f}x {diff:>13.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
