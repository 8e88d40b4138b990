"""Time the jitted kernels against their numpy counterparts.

Run with ``python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]``.
Both paths live in :mod:`nilgeom.kernels`; the numba columns are skipped
when numba is unavailable or ``NILGEOM_NO_NUMBA=1`` is set.
"""
import argparse
import math
import time

import numpy as np

from nilgeom import kernels


def best_of(fn, repeat):
    fn()  # warm-up (includes compilation for the jitted path)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n, rng):
    a = rng.uniform(-math.pi, math.pi, n)
    th = rng.uniform(-1.5, 1.5, n)
    t = rng.uniform(0.1, 3.0, n)
    p = np.zeros(3)
    q = np.ascontiguousarray(rng.uniform(-2.0, 2.0, (n, 3)))
    tri = np.array([[1.0, 0.0, 0.0], [1 / 3, 2.0, 1.0], [0.5, -1.0, 1.0]])
    small = np.ascontiguousarray(q[: max(n // 10, 1)])
    yield ("geodesic_points", lambda: kernels._nb_geodesic_points(a, th, t),
           lambda: kernels._np_geodesic_points(a, th, t))
    yield ("distances", lambda: kernels._nb_distances(p, q), lambda: kernels._np_distances(p, q))
    yield ("distance_grads", lambda: kernels._nb_distance_grads(p, q),
           lambda: kernels._np_distance_grads(p, q))
    yield ("surface_dets", lambda: kernels._nb_surface_dets(small, tri),
           lambda: kernels._np_surface_dets(small, tri))


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"numba enabled: {kernels.USE_NUMBA}   n = {args.n}")
    print(f"{'kernel':<18}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}{'max |diff|':>14}")
    for name, nb, npf in cases(args.n, rng):
        t_np = best_of(npf, args.repeat)
        if kernels.USE_NUMBA:
            t_nb = best_of(nb, args.repeat)
            diff = float(np.max(np.abs(np.asarray(nb()) - np.asarray(npf()))))
            print(f"{name:<18}{1e3 * t_nb:>12.2f}{1e3 * t_np:>12.2f}{t_np / t_nb:>10.1f}{diff:>14.2e}")
        else:
            print(f"{name:<18}{'-':>12}{1e3 * t_np:>12.2f}{'-':>10}{'-':>14}")


if __name__ == "__main__":
    main()
