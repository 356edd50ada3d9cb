"""Time the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
the same inputs with both backends and the outputs are compared.
"""
import argparse
import timeit

import numpy as np

from quatcs import _backend
from quatcs.quadrature import STATED_GRID, QuadratureGrid


def cases(rng):
    grid = QuadratureGrid(*STATED_GRID)
    V = rng.standard_normal((grid.size, 9, 4)) * 0.1
    L = rng.standard_normal((2000, 4))
    r2 = (L ** 2).sum(-1)
    conj = L * np.array([1, -1, -1, -1])
    X = np.tile([0.0, 1.0, 0.0, 0.0], (2000, 1))
    return {
        "monomials (147k points, n=9)": lambda k: k.monomials(grid.points, 9),
        "accumulate_outer (147k points, 9 levels)": lambda k: k.accumulate_outer(V, grid.weights),
        "sandwich_series (2000 Ci sums)": lambda k: k.sandwich_series(conj, X, L, -r2, 1e-16, 100000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernels are not built; only the numpy fallback is available")
    kernels = {n: _backend.get(n) for n in names}
    rng = np.random.default_rng(0)
    print(f"{'kernel':<44}" + "".join(f"{n:>12}" for n in names) + "     speedup    rel diff")
    for label, fn in cases(rng).items():
        times, outs = {}, {}
        for n, k in kernels.items():
            outs[n] = fn(k)
            times[n] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        row = f"{label:<44}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if "compiled" in names:
            a, b = outs["python"], outs["compiled"]
            a = a[0] if isinstance(a, tuple) else a
            b = b[0] if isinstance(b, tuple) else b
            row += f"  {times['python'] / times['compiled']:>9.1f}x  {np.abs(a - b).max() / max(1.0, np.abs(a).max()):.2e}"
        print(row)


if __name__ == "__main__":
    main()
