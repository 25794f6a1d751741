"""Time the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import timeit

import numpy as np

from selfsim import _kernels


def cases():
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    poly = np.column_stack([1.5 * np.cos(th), np.sin(th)])
    return {
        "planar_event": lambda k: k.planar_event(np.array([1.9, 0.0, 0.5 * math.pi]), 1.0, 1e-3, 2_000_000),
        "profile_event": lambda k: k.profile_event(np.array([0.2185, 0.0, 0.5 * math.pi]), 1.0, 1e-3, 2_000_000),
        "planar_path": lambda k: k.planar_path(np.array([1.9, 0.0, 0.5 * math.pi]), 1.0, 1e-3, 5000),
        "csf_steps": lambda k: k.csf_steps(poly.copy(), 1e-6, 200, 1e6),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _kernels.backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<15}" + "".join(f"{name:>12}" for name in backends) + (f"{'speedup':>10}" if len(backends) > 1 else ""))
    for name, fn in cases().items():
        times = {b: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for b, mod in backends.items()}
        row = f"{name:<15}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
