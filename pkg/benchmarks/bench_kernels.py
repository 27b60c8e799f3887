"""Timing of the compiled kernels against the numpy fallback, and of the FFT matvec.

Run with ``python benchmarks/bench_kernels.py [--repeat R]``. Prints the median
of R runs per case; numbers are indicative only.
"""
import argparse
import timeit

import numpy as np

from genhilbert import _pykernels
from genhilbert.measure import lebesgue, moments_up_to
from genhilbert.operator import HankelTruncation, hankel_apply_fast

try:
    from genhilbert import _ckernels
except ImportError:
    _ckernels = None


def median_time(fn, repeat):
    fn()  # warm-up
    return float(np.median(timeit.repeat(fn, number=1, repeat=repeat)))


def row(label, seconds):
    print(f"{label:<44s} {seconds * 1e3:10.3f} ms")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels is not None else [])
    if _ckernels is None:
        print("compiled extension not built; timing the numpy fallback only")

    for N in (256, 1024, 4096):
        T = HankelTruncation.from_measure(lebesgue(), N)
        a = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        for name, mod in backends:
            row(f"hankel naive  N={N:<5d} [{name}]", median_time(lambda: mod.hankel_matvec(T.moments, a), args.repeat))
        row(f"hankel fft    N={N:<5d}", median_time(lambda: hankel_apply_fast(T, a), args.repeat))

    coeffs = rng.standard_normal(65) + 1j * rng.standard_normal(65)
    z = 0.9 * np.exp(2j * np.pi * rng.random(20000))
    for name, mod in backends:
        row(f"horner deg 64, 20000 points [{name}]", median_time(lambda: mod.horner(coeffs, z), args.repeat))

    mom = moments_up_to(lebesgue(), 8192).values
    for name, mod in backends:
        row(f"differences k<=8, M=8192 [{name}]",
            median_time(lambda: mod.alternating_differences(mom, 8), args.repeat))


if __name__ == "__main__":
    main()
