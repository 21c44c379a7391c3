"""Decompose synthetic benchmark runtimes into t = alpha + beta * N.

alpha is the one-time cost of enabling instrumentation, beta the added cost
per loop iteration. Medians over repetitions feed a degree-1 least-squares
fit, and comparing two fitted models isolates what one instrumenter adds
over another.

Run:  python demos/03_overhead_decomposition.py
"""

import random

from tracelet_core import BenchmarkSample, compare_overheads, fit_overhead, format_model

RNG = random.Random(7)
N_VALUES = [100_000, 300_000, 1_000_000, 3_000_000]
REPS = 51


def synthesize(instrumenter, alpha, beta):
    """51 noisy repetitions per N for one instrumenter configuration."""
    return [
        BenchmarkSample(instrumenter, "case2_call", n, rep,
                        (alpha + beta * n) * (1 + RNG.uniform(-0.04, 0.04)))
        for n in N_VALUES
        for rep in range(REPS)
    ]


def main():
    # Ground truth chosen to resemble a hooked interpreter vs a plain run.
    hooked = fit_overhead(synthesize("hooked", alpha=0.61, beta=15.0e-6))
    plain = fit_overhead(synthesize("plain", alpha=0.05, beta=0.3e-6))

    print(f"{'instrumenter':<14} {'alpha & beta':<20} (true: hooked 0.61 s & 15.0 us)")
    print(f"{'hooked':<14} {format_model(hooked):<20}")
    print(f"{'plain':<14} {format_model(plain):<20}")
    print()

    delta = compare_overheads(hooked, plain)
    print(f"delta alpha: {delta.dalpha_s * 1e3:8.1f} ms   (one-time setup cost)")
    print(f"delta beta:  {delta.dbeta_s * 1e6:8.2f} us   (added cost per call)")


if __name__ == "__main__":
    main()
