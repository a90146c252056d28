"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_kernels.py [--starts N]

Kernel timings call both variants in one process. The end-to-end optimizer
timing runs in subprocesses, once with SHAREDRAND_DISABLE_NUMBA=1, since the
flag is read at import time.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from sharedrand import _accel, kernels

E2E = """
import time
from sharedrand.game import classical_max_payoff
from sharedrand.maximin import OptimizerConfig
classical_max_payoff(2, 3, OptimizerConfig(max_starts=1))
t = time.perf_counter()
r = classical_max_payoff(2, 3, OptimizerConfig(max_starts={starts}))
print(time.perf_counter() - t, r.value)
"""


def bench(fn, *args, number=2000):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=3)) / number


def kernel_table():
    rng = np.random.default_rng(0)
    v = rng.normal(size=8)
    p = rng.random((6, 6))
    p /= p.sum()
    sa, sb = rng.random((8, 6)), rng.random((8, 6))
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (a + a.conj().T) / 2
    cases = [
        ("project_simplex(8)", kernels._project_simplex_np, kernels._project_simplex_nb, (v,)),
        ("mutual_information(6x6)", kernels._mutual_information_np,
         kernels._mutual_information_nb, (p,)),
        ("apply_local(6->8)", kernels._apply_local_np, kernels._apply_local_nb, (sa, sb, p)),
        ("jacobi_eigh(4x4)", kernels._jacobi_eigh_np, kernels._jacobi_eigh_nb, (h,)),
    ]
    print(f"{'kernel':<26}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for name, f_np, f_nb, args in cases:
        t_np = bench(f_np, *args, number=200 if "jacobi" in name else 2000)
        t_nb = bench(f_nb, *args)
        print(f"{name:<26}{t_np * 1e6:>12.2f}{t_nb * 1e6:>12.2f}{t_np / t_nb:>10.1f}")


def end_to_end(starts):
    print(f"\nclassical_max_payoff(2, 3), {starts} starts")
    for label, flag in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, SHAREDRAND_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E.format(starts=starts)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  {label:<6} {float(out[0]):8.2f} s   value {float(out[1]):.10f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--starts", type=int, default=3)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    kernel_table()
    end_to_end(args.starts)


if __name__ == "__main__":
    main()
