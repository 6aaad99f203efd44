"""Compare the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from mortonvox import _backend, shapes


def cases(n, rng):
    rho = rng.integers(0, 1 << 21, (n, 3))
    codes = _backend.get("python").encode3(rho)
    src = rng.integers(0, 1 << 30, n).astype(np.uint64)
    dst = rng.integers(0, 1 << 30, n).astype(np.uint64)
    a = rng.integers(0, 1 << 62, n, dtype=np.uint64)
    b = rng.integers(0, 1 << 62, n, dtype=np.uint64)
    keys = np.unique(codes)
    queries = rng.permutation(codes)
    tris = np.ascontiguousarray(shapes.icosphere(4).triangles)
    rays = (tris, 2, -1.05, 0.025, 85, -1.05, 0.025, 85, -1.05, 2.125, 1e-12)
    return {
        "encode3": lambda k: k.encode3(rho),
        "decode3": lambda k: k.decode3(codes),
        "interleave2": lambda k: k.interleave2(src, dst),
        "morton_add (63-bit)": lambda k: k.morton_add(a, b, 63, 3),
        "lookup": lambda k: k.lookup(keys, queries),
        "cast_rays (5120 tris, 85^2 rays)": lambda k: k.cast_rays(*rays),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=200_000, help="array length for code kernels")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    py = _backend.get("python")
    try:
        cy = _backend.get("cython")
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases(args.n, rng).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:34s} {1e3 * t_py:12.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
