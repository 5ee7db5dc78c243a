"""Time the compiled and numpy pair-gap scans on a local-search sized grid.

Usage: python3 benchmarks/bench_kernels.py [--grid 457] [--repeat 5]
"""
import argparse
import json
import timeit

import numpy as np

from pseudomultipliers import _kernels_py
from pseudomultipliers.linalg_core import orthonormalize
from pseudomultipliers.local import _Objective, disc_grid
from pseudomultipliers.spaces import build_coefficient_model

try:
    from pseudomultipliers import _kernels
except ImportError:
    _kernels = None


def grams(m: int, degree: int = 40):
    H = build_coefficient_model(degree)
    M = orthonormalize(np.column_stack([H.monomial(0), H.monomial(1)]), H.space)
    n_theta = 24
    n_r = max(2, (m - 1) // n_theta + 1)
    D = disc_grid(n_r=n_r, n_theta=n_theta)
    obj = _Objective(H, M, budget=1)
    return obj.residual_grams(obj.white(D))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--grid", type=int, default=457)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    G, R = grams(args.grid)
    out = {"grid_points": G.shape[0], "pairs": G.shape[0] * (G.shape[0] - 1) // 2}
    t_np = min(timeit.repeat(lambda: _kernels_py.pair_gap_scan(G, R), number=1, repeat=args.repeat))
    out["numpy_seconds"] = t_np
    if _kernels is not None:
        t_cy = min(timeit.repeat(lambda: _kernels.pair_gap_scan(G, R), number=1, repeat=args.repeat))
        diff = np.max(np.abs(_kernels.pair_gap_scan(G, R) - _kernels_py.pair_gap_scan(G, R)))
        out.update(cython_seconds=t_cy, speedup=t_np / t_cy, max_abs_difference=float(diff))
    else:
        out["cython_seconds"] = None
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
