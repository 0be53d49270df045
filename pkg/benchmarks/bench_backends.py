"""Benchmark the compiled kernel extension against the NumPy fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py

Times the two hot kernels (Jacobi elliptic evaluation over argument
arrays and the pointwise nonlinear RK4 step) plus an end-to-end
split-step run, for whichever backends are importable.
"""

import time

import numpy as np

from triadlab._kernels import _pure

try:
    from triadlab._kernels import _corecy
except ImportError:
    _corecy = None


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_jacobi(module, u, k, kc_sq, loops=20):
    def body():
        for _ in range(loops):
            module.jacobi_arrays(u, k, kc_sq)

    return _time(body) / loops


def bench_rk4(module, psi, dt, loops=200):
    def body():
        state = psi
        for _ in range(loops):
            state = module.triad_rk4_step(state, -2.0, 1.0, 1.0, dt)

    return _time(body) / loops


def main():
    rng = np.random.default_rng(42)
    k = 0.6
    kc_sq = (1.0 - k) * (1.0 + k)
    u = rng.uniform(-3.0, 3.0, 100_000)

    def carrier_state(n):
        return np.array(
            [
                np.zeros(n, dtype=complex),
                np.ones(n, dtype=complex),
                0.6 * np.ones(n, dtype=complex),
            ]
        )

    psi_large = carrier_state(4096)
    psi_small = carrier_state(256)

    backends = [("python", _pure)]
    if _corecy is not None:
        backends.append(("compiled", _corecy))
    else:
        print("compiled extension not importable; timing the fallback only")

    print(f"{'kernel':<28}{'backend':<12}{'time':>12}")
    results = {}
    for name, module in backends:
        t = bench_jacobi(module, u, k, kc_sq)
        results[("jacobi", name)] = t
        print(f"{'jacobi_arrays (1e5 pts)':<28}{name:<12}{t * 1e3:>10.3f} ms")
    for name, module in backends:
        t = bench_rk4(module, psi_large, 1e-3)
        results[("rk4_large", name)] = t
        print(f"{'triad_rk4_step (3x4096)':<28}{name:<12}{t * 1e6:>10.3f} us")
    for name, module in backends:
        t = bench_rk4(module, psi_small, 1e-3, loops=2000)
        results[("rk4_small", name)] = t
        print(f"{'triad_rk4_step (3x256)':<28}{name:<12}{t * 1e6:>10.3f} us")

    if _corecy is not None:
        for kernel in ("jacobi", "rk4_large", "rk4_small"):
            ratio = results[(kernel, "python")] / results[(kernel, "compiled")]
            print(f"{kernel}: compiled is {ratio:.1f}x the fallback")


if __name__ == "__main__":
    main()
