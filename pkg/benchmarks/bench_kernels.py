"""Benchmark the compiled kernels against the pure NumPy fallback on the
workloads that dominate sweep runtime: grid interpolation under sphere
quadrature and rectangle-union membership under arc quadrature.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from sphavg import kernels
from sphavg.funcspace import GridFunction
from sphavg.quad import sphere_rule


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_interp_2d(rng, repeat):
    n = 512
    vals = rng.normal(size=(n, n))
    gf = GridFunction([-4.0, -4.0], [4.0, 4.0], vals)
    rule = sphere_rule(2, 96, "normalized")
    ts = 2.0 ** (np.arange(0, 65) / 16.0 - 2.0)
    x = np.array([0.2, -0.1])
    pts = (x[None, None, :]
           - ts[:, None, None] * rule.nodes[None, :, :]).reshape(-1, 2)
    px = np.ascontiguousarray(pts[:, 0])
    py = np.ascontiguousarray(pts[:, 1])

    def run():
        kernels.eval_grid_2d(vals, -4.0, -4.0, gf.h[0], gf.h[1], px, py)

    return pts.shape[0], run


def bench_interp_3d(rng, repeat):
    n = 96
    vals = rng.normal(size=(n, n, n))
    pts = rng.uniform(-1, 1, size=(400_000, 3))
    cols = [np.ascontiguousarray(pts[:, i]) for i in range(3)]

    def run():
        kernels.eval_grid_3d(vals, -1, -1, -1, 2 / n, 2 / n, 2 / n, *cols)

    return pts.shape[0], run


def bench_rect_union(rng, repeat):
    m = 256
    ang = rng.uniform(0, 1, m)
    cx, cy = rng.uniform(-0.1, 0.1, m), rng.uniform(-0.1, 0.1, m)
    ux, uy = np.cos(ang), np.sin(ang)
    hl = np.full(m, 0.5 / 256)
    hw = np.full(m, 0.5 / 256**2)
    px = rng.uniform(-0.1, 0.1, 200_000)
    py = rng.uniform(-0.1, 0.1, 200_000)

    def run():
        kernels.rect_union_contains(cx, cy, ux, uy, hl, hw, px, py)

    return px.shape[0], run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    benches = [
        ("interp-2d (sphere-average batch)", bench_interp_2d),
        ("interp-3d", bench_interp_3d),
        ("rect-union membership", bench_rect_union),
    ]
    backends = ["python"]
    if kernels.HAVE_COMPILED:
        backends.insert(0, "compiled")
    else:
        print("compiled kernels not available; benchmarking fallback only")
    print(f"{'benchmark':38s} {'backend':9s} {'points':>9s} "
          f"{'time':>9s} {'Mpts/s':>8s}")
    for name, factory in benches:
        npts, run = factory(rng, args.repeat)
        times = {}
        for backend in backends:
            kernels.set_backend(backend)
            t = timeit(run, args.repeat)
            times[backend] = t
            print(f"{name:38s} {backend:9s} {npts:9d} {t*1e3:8.2f}ms "
                  f"{npts/t/1e6:8.1f}")
        if len(times) == 2:
            print(f"{'':38s} speedup x{times['python']/times['compiled']:.2f}")
    kernels.set_backend("compiled" if kernels.HAVE_COMPILED else "python")


if __name__ == "__main__":
    main()
