"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs the hot kernels (thin QR, one-sided Jacobi SVD, symmetric Jacobi
eigensolver, pairwise squared distances) through both backends on the same
inputs and reports best-of-N wall times.  The first jitted call is excluded
from timing (compilation warmup).

Usage:
    python3 benchmarks/bench_backends.py [--repeats 5] [--scale small|large]
"""

import argparse
import time

import numpy as np

from flowspec import backend
from flowspec.linalg import gaussian_matrix, qr_thin, svd_exact, sym_eig


def best_of(func, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def make_cases(scale):
    if scale == "small":
        qr_shape, svd_shape, eig_n, dist_shape = (512, 32), (512, 48), 64, (64, 200)
    else:
        qr_shape, svd_shape, eig_n, dist_shape = (4096, 64), (4096, 100), 150, (256, 800)
    a_qr = gaussian_matrix(*qr_shape, seed=0)
    a_svd = gaussian_matrix(*svd_shape, seed=1)
    x = gaussian_matrix(eig_n, eig_n, seed=2)
    a_sym = (x + x.T) / 2
    y = gaussian_matrix(*dist_shape, seed=3)
    from flowspec import diffusion
    return [
        (f"qr_thin {qr_shape[0]}x{qr_shape[1]}", lambda: qr_thin(a_qr)),
        (f"svd_exact {svd_shape[0]}x{svd_shape[1]}", lambda: svd_exact(a_svd)),
        (f"sym_eig {eig_n}x{eig_n}", lambda: sym_eig(a_sym)),
        (f"pairwise_sqdist {dist_shape[0]}x{dist_shape[1]}",
         lambda: diffusion.default_epsilon(y)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--scale", choices=["small", "large"], default="small")
    args = parser.parse_args()

    backends = backend.available_backends()
    cases = make_cases(args.scale)
    results = {}
    previous = backend.active_backend()
    try:
        for name in backends:
            backend.use_backend(name)
            for label, func in cases:
                func()  # warmup (jit compilation for the numba backend)
                results[(name, label)] = best_of(func, args.repeats)
    finally:
        backend.use_backend(previous)

    width = max(len(label) for label, _ in cases)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, _ in cases:
        row = f"{label:<{width}}  "
        row += "  ".join(f"{results[(b, label)] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) > 1:
            ratio = results[("numpy", label)] / results[("numba", label)]
            row += f"  {ratio:>7.2f}x"
        print(row)
    if "numba" not in backends:
        print("\n(numba not installed; only the numpy fallback was timed)")


if __name__ == "__main__":
    main()
