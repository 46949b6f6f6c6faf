"""Compare the numba and numpy backends of the hot loops.

Usage::

    python3 benchmarks/bench_backends.py [--repeat 5]

Part one times the three kernels of ``fofana_lab._accel`` directly on the
default grid sizes.  Part two runs an end-to-end workload (maximal
functions and the nontangential maximal function on both default grids)
in a fresh interpreter for each value of ``FOFANA_LAB_BACKEND``, so the
numba figures include JIT compilation.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import textwrap
import timeit

import numpy as np

from fofana_lab import _accel

WORKLOAD = textwrap.dedent(
    """
    import time
    t0 = time.perf_counter()
    from fofana_lab import _accel
    from fofana_lab.catalog import catalog
    from fofana_lab.grid import make_grid
    from fofana_lab.maximal import default_t_ladder, hl_maximal, nontangential_maximal
    from fofana_lab.transforms import poisson_extend
    for d, L, m in ((1, 64, 64), (2, 16, 16)):
        g = make_grid(d, L, m)
        f = catalog(d)["multiscale"].sample(g)
        hl_maximal(f)
        nontangential_maximal(poisson_extend(f, default_t_ladder(g)))
    print(_accel.BACKEND, time.perf_counter() - t0)
    """
)


def bench_kernels(repeat: int) -> None:
    impls = {"numpy": _accel.numpy_impl}
    if _accel.numba_impl is not None:
        impls["numba"] = _accel.numba_impl
    rng = np.random.default_rng(0)
    cases = [
        ("ball_sum 1x4096 r=256 cells", "ball_sum", rng.random((1, 4096)), 256.0**2),
        ("ball_sum 256x256 r=16 cells", "ball_sum", rng.random((256, 256)), 16.0**2),
        ("ball_max 256x256 r=16 cells", "ball_max", rng.random((256, 256)), 16.0**2),
        ("ball_max 256x256 r=64 cells", "ball_max", rng.random((256, 256)), 64.0**2),
    ]
    print(f"{'kernel':34s}" + "".join(f"{k:>12s}" for k in impls))
    for label, fn, v, R2 in cases:
        cells = []
        for impl in impls.values():
            op = getattr(impl, fn)
            op(v, R2)  # warm up (JIT compile)
            cells.append(min(timeit.repeat(lambda: op(v, R2), number=1, repeat=repeat)))
        print(f"{label:34s}" + "".join(f"{1e3 * t:10.2f}ms" for t in cells))
    u = rng.random((1, 1024))
    K = rng.random((1, 1024))
    cells = []
    for impl in impls.values():
        impl.circular_direct(u, K)
        cells.append(min(timeit.repeat(lambda: impl.circular_direct(u, K), number=1, repeat=repeat)))
    print(f"{'circular_direct 1x1024':34s}" + "".join(f"{1e3 * t:10.2f}ms" for t in cells))


def bench_end_to_end() -> None:
    print("\nend to end (fresh interpreter, includes imports and JIT):")
    for backend in ("numba", "numpy"):
        env = dict(os.environ, FOFANA_LAB_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"  requested {backend:6s} -> used {name:6s} {float(secs):8.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_kernels(args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
