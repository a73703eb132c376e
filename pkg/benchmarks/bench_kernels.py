"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py --Ns 64,256,1024 --repeat 5
"""

import argparse
import math
import timeit

import numpy as np

from chui_lab import _backend
from chui_lab import _kernels_py as pure
from chui_lab.weights import LogPower, PowerAlpha, interaction_kernel


def cases(N, rng):
    theta = rng.uniform(0.0, 2 * math.pi, N)
    charge = np.ones(N)
    z = 0.9 * np.exp(1j * rng.uniform(0.0, 2 * math.pi, 4096))
    binom = interaction_kernel(PowerAlpha(1.0))
    quad = interaction_kernel(LogPower(2.0))
    return {
        "pair_sums_binom": lambda k: k.pair_sums_binom(theta, charge, binom.poly, 1, binom.phi0, True),
        "pair_sums_quad": lambda k: k.pair_sums_quad(theta, charge, quad.u, quad.s, quad.w, quad.phi0, True),
        "cauchy_sum": lambda k: k.cauchy_sum(theta, z),
        "power_sums": lambda k: k.power_sums(theta, 4 * N),
    }


def best_time(func, repeat):
    timer = timeit.Timer(func)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--Ns", default="64,256")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _backend.compiled is None:
        raise SystemExit("compiled kernels are not built; install with pip install -e . --no-build-isolation")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<18}{'N':>6}{'compiled [s]':>15}{'numpy [s]':>13}{'speedup':>10}")
    for N in (int(n) for n in args.Ns.split(",")):
        for name, call in cases(N, rng).items():
            tc = best_time(lambda: call(_backend.compiled), args.repeat)
            tp = best_time(lambda: call(pure), args.repeat)
            print(f"{name:<18}{N:>6}{tc:>15.3e}{tp:>13.3e}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
