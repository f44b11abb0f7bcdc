"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import timeit

import numpy as np

from jcstark import _kernels_py, kernels

try:
    from jcstark import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def workloads(rng, size):
    grid = np.linspace(-10, 10, 4001)
    centers, weights = rng.uniform(-8, 8, size), rng.uniform(0, 1, size)
    nu = np.linspace(-12, 12, 2001)
    tau_u = np.linspace(0, 400, 20 * size)
    tau_n = np.sort(rng.uniform(0, 400, 20 * size))
    a, b = rng.normal(size=tau_u.size), rng.normal(size=tau_u.size)
    freqs = rng.uniform(-20, 20, size)
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    return {
        "lorentzian_sum": lambda m: kernels.lorentzian_sum(grid, centers, weights, 0.1, 1.0, impl=m),
        "damped_fourier (uniform)": lambda m: kernels.damped_fourier(nu, tau_u, a, b, impl=m),
        "damped_fourier (direct)": lambda m: kernels.damped_fourier(nu, tau_n, a, b, impl=m),
        "exp_sum": lambda m: kernels.exp_sum(tau_n, freqs, amps, impl=m),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200, help="number of lines / frequencies")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    impls = {"python": _kernels_py}
    if _compiled is not None:
        impls["cython"] = _compiled
    else:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':28s}" + "".join(f"{k:>12s}" for k in impls) + "     speedup")
    for name, fn in workloads(rng, args.size).items():
        times = {k: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat))
                 for k, m in impls.items()}
        speed = f"{times['python'] / times['cython']:9.1f}x" if "cython" in times else ""
        print(f"{name:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values()) + "  " + speed)


if __name__ == "__main__":
    main()
