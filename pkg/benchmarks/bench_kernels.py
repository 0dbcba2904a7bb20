"""Timing comparison of the compiled and pure-numpy scoring kernels.

Runs each kernel over a batch of random (spectrum, peptide) workloads and
reports per-call time plus the compiled/numpy speedup. Usage:

    python3 benchmarks/bench_kernels.py [--pairs 200] [--repeats 5]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from didea.kernels import pykernels

try:
    from didea.kernels import _ckernels
except ImportError:
    _ckernels = None

N_BINS = 2000
SHIFT_MAX = 37
XCORR_RANGE = 75
FRAGS = 14  # ladder size of a typical tryptic peptide


def make_workloads(rng, n_pairs):
    loads = []
    for _ in range(n_pairs):
        weights = 1.0 + rng.random(N_BINS + 1) * 0.2
        weights[0] = 1.0
        log_weights = np.log(weights)
        binned = np.zeros(N_BINS + 1)
        filled = rng.integers(1, N_BINS + 1, size=60)
        binned[filled] = rng.random(60)
        bins = {k: rng.integers(1, N_BINS + 1, size=FRAGS)
                for k in ("b1", "y1", "b2", "y2")}
        phi = np.unique(rng.integers(1, N_BINS + 1, size=2 * FRAGS))
        loads.append((bins, weights, log_weights, binned, phi))
    return loads


def run(impl, loads):
    for bins, weights, log_weights, binned, phi in loads:
        impl.shift_profile_sum_log(bins["b1"], bins["y1"],
                                   log_weights, SHIFT_MAX)
        impl.shift_profile_split_charge(bins["b1"], bins["y1"],
                                        bins["b2"], bins["y2"],
                                        weights, SHIFT_MAX)
        impl.shift_profile_single_proton(bins["b1"], bins["y1"],
                                         weights, SHIFT_MAX)
        impl.shifted_theoretical_correlations(phi, binned, XCORR_RANGE)


def best_time(impl, loads, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        run(impl, loads)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200,
                        help="workloads per timing pass (default 200)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing passes; the best is reported (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.Generator(np.random.PCG64(args.seed))
    loads = make_workloads(rng, args.pairs)

    run(pykernels, loads)  # warm-up
    numpy_s = best_time(pykernels, loads, args.repeats)
    per_call = numpy_s / (4 * args.pairs)
    print(f"numpy   backend: {numpy_s * 1e3:8.2f} ms/pass "
          f"({per_call * 1e6:7.1f} us/kernel-call)")

    if _ckernels is None:
        print("compiled backend not available; install with the extension "
              "built to compare")
        return 1

    run(_ckernels, loads)
    compiled_s = best_time(_ckernels, loads, args.repeats)
    per_call = compiled_s / (4 * args.pairs)
    print(f"compiled backend: {compiled_s * 1e3:8.2f} ms/pass "
          f"({per_call * 1e6:7.1f} us/kernel-call)")
    print(f"speedup: {numpy_s / compiled_s:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
