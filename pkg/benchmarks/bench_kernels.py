"""Timing comparison of the compiled and numpy quadrature kernels.

Run as a script:  python3 benchmarks/bench_kernels.py

Exercises each reduction at contour-like sizes (hundreds of nodes,
matrices of size 1..4) plus one end-to-end Picard solve per backend.
"""

import os
import time

import numpy as np

from schurroots._kernels import _numpy as knp

try:
    from schurroots._kernels import _speedups as ksp
except ImportError:
    ksp = None


def _time(fn, *args, repeat=200):
    fn(*args)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22s} {'n':>2s} {'nodes':>6s} {'numpy':>10s} "
          f"{'compiled':>10s} {'speedup':>8s}")
    for n in (1, 2, 4):
        M = 640
        kv = rng.normal(size=(M, n, n)) + 1j * rng.normal(size=(M, n, n))
        mus = rng.normal(size=M) + 1j * rng.normal(size=M)
        w = rng.normal(size=M) + 0j
        zm = rng.normal(size=(n, n)) + 1j * (rng.normal(size=(n, n)) + 3 * np.eye(n))
        zl = zm.conj().T - 6j * np.eye(n)
        zs = rng.normal(size=40) + 1j * rng.normal(size=40)
        cases = [
            ("cauchy_sum", (kv, mus, w, 0.2 + 2j)),
            ("cauchy_sum_many", (kv, mus, w, zs)),
            ("resolvent_sum", (kv, mus, w, zm)),
            ("resolvent_cauchy_sum", (kv, mus, w, zm, 0.2 + 2j)),
            ("sandwich_sum", (kv, mus, w, zl, zm)),
        ]
        for name, args in cases:
            t_np = _time(getattr(knp, name), *args)
            if ksp is None:
                print(f"{name:<22s} {n:>2d} {M:>6d} {t_np * 1e6:>8.1f}us "
                      f"{'n/a':>10s} {'':>8s}")
                continue
            t_sp = _time(getattr(ksp, name), *args)
            print(f"{name:<22s} {n:>2d} {M:>6d} {t_np * 1e6:>8.1f}us "
                  f"{t_sp * 1e6:>8.1f}us {t_np / t_sp:>7.2f}x")


def bench_solve():
    import importlib

    import schurroots

    print()
    for backend in ("numpy", "compiled"):
        os.environ["SCHURROOTS_KERNELS"] = backend
        import schurroots._kernels as kmod
        importlib.reload(kmod)
        import schurroots.rootsolver as rmod
        importlib.reload(rmod)
        a1 = np.array([[0.05, 0.02], [0.02, -0.03]])
        c0 = np.array([[0.10, -0.05], [0.02, 0.08]])
        c1 = np.array([[0.03, 0.01], [-0.02, 0.04]])
        model = schurroots.build_model((-1.0, 1.0), a1, [c0, c1])
        contour = schurroots.make_contour(model, 1)
        if kmod.BACKEND != backend:
            print(f"solve_basic [{backend:>8s}]  unavailable")
            continue
        t0 = time.perf_counter()
        for _ in range(10):
            rmod.solve_basic(model, contour)
        dt = (time.perf_counter() - t0) / 10
        print(f"solve_basic [{kmod.BACKEND:>8s}]  {dt * 1e3:8.2f} ms")
    os.environ.pop("SCHURROOTS_KERNELS", None)


if __name__ == "__main__":
    bench_kernels()
    bench_solve()
