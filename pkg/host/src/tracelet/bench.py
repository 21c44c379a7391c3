"""Benchmark kernels and the run-matrix driver.

Each cell launches a fresh interpreter and times the whole invocation, so
the constant term of a later fit covers interpreter startup plus measurement
setup and teardown. Instrumented cells run with a dedicated substrate
setting (default "none") so samples capture pure instrumentation cost; the
"none" instrumenter row launches the kernel without the tool module at all.
"""

import argparse
import csv
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

CASES = ("case1_loop", "case2_call")
INSTRUMENTERS = ("none", "profile", "trace")

SAMPLES_HEADER = ("instrumenter", "case", "iterations", "repetition", "runtime_s")

DEFAULT_N = "1e5,3e5,1e6,3e6"
DEFAULT_REPS = 51


class KernelError(RuntimeError):
    """Kernel process failed; message carries the failing configuration."""


def kernel_path(case_label: str) -> Path:
    if case_label not in CASES:
        raise ValueError(f"unknown case {case_label!r}; expected one of {CASES}")
    return Path(__file__).parent / "kernels" / f"{case_label}.py"


def _child_env() -> dict:
    # Never inherit a half-finished handshake into kernel processes.
    return {k: v for k, v in os.environ.items() if not k.startswith("TRACELET_")}


def run_kernel(
    case_label: str,
    iterations: int,
    instrumenter: str = "none",
    outdir=None,
    substrate: str = "none",
) -> float:
    """Run one kernel process and return the wall clock of the full invocation."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    command = [sys.executable]
    if instrumenter != "none":
        if outdir is None:
            raise ValueError("instrumented runs need an outdir")
        command += [
            "-m",
            "tracelet",
            f"--instrumenter={instrumenter}",
            f"--substrate={substrate}",
            f"--outdir={outdir}",
        ]
    command += [str(kernel_path(case_label)), str(iterations)]

    started = time.perf_counter()
    proc = subprocess.run(command, env=_child_env(), capture_output=True, text=True)
    elapsed = time.perf_counter() - started
    if proc.returncode != 0:
        tail = proc.stderr.strip().splitlines()[-3:]
        raise KernelError(
            f"kernel failed (case={case_label}, N={iterations}, "
            f"instrumenter={instrumenter}, rc={proc.returncode}): {' | '.join(tail)}"
        )
    return elapsed


def run_matrix(
    instrumenters,
    cases,
    n_list,
    repetitions: int = DEFAULT_REPS,
    out_csv="samples.csv",
    outdir=None,
    substrate: str = "none",
    interleave: bool = False,
    progress=None,
) -> int:
    """Time the full cross product sequentially and write fit-ready CSV rows.

    Always one kernel process at a time. By default all repetitions of a
    cell run back to back; with `interleave` each repetition sweeps the whole
    cross product instead, so slow machine drift lands on every configuration
    rather than biasing whole groups.
    """
    if not instrumenters or not cases or not n_list or repetitions < 1:
        raise ValueError("instrumenters, cases, n_list and repetitions must be non-empty")
    scratch = None
    if outdir is None and any(i != "none" for i in instrumenters):
        scratch = tempfile.TemporaryDirectory(prefix="tracelet-bench-")
        outdir = scratch.name

    cells = [
        (instrumenter, case_label, n)
        for instrumenter in instrumenters
        for case_label in cases
        for n in n_list
    ]
    if interleave:
        schedule = [(cell, rep) for rep in range(repetitions) for cell in cells]
    else:
        schedule = [(cell, rep) for cell in cells for rep in range(repetitions)]

    samples = {}
    try:
        for cell, repetition in schedule:
            instrumenter, case_label, n = cell
            runtime = run_kernel(case_label, n, instrumenter, outdir, substrate)
            samples[(cell, repetition)] = runtime
            if progress is not None and repetition == repetitions - 1:
                progress(instrumenter, case_label, n)
    finally:
        if scratch is not None:
            scratch.cleanup()

    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLES_HEADER)
        for cell in cells:
            instrumenter, case_label, n = cell
            for repetition in range(repetitions):
                writer.writerow(
                    [instrumenter, case_label, n, repetition,
                     f"{samples[(cell, repetition)]:.9f}"]
                )
    return len(samples)


def _parse_counts(text: str) -> list:
    counts = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        counts.append(int(float(token)))
    if not counts:
        raise ValueError("empty iteration list")
    return counts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tracelet-bench",
        description="Run the benchmark kernel matrix and emit samples for fitting.",
    )
    parser.add_argument("--cases", default=",".join(CASES))
    parser.add_argument("--instrumenters", default=",".join(INSTRUMENTERS))
    parser.add_argument("--n", default=DEFAULT_N, help="comma list, scientific ok (1e5,3e5,...)")
    parser.add_argument("--reps", type=int, default=DEFAULT_REPS)
    parser.add_argument("--out", default="samples.csv")
    parser.add_argument("--outdir", default=None, help="scratch dir for instrumented runs")
    parser.add_argument(
        "--interleave",
        action="store_true",
        help="sweep the whole matrix per repetition instead of cell by cell",
    )
    args = parser.parse_args(argv)

    cases = [c.strip() for c in args.cases.split(",") if c.strip()]
    instrumenters = [i.strip() for i in args.instrumenters.split(",") if i.strip()]
    for case_label in cases:
        try:
            kernel_path(case_label)
        except ValueError as exc:
            parser.error(str(exc))
    for instrumenter in instrumenters:
        if instrumenter not in INSTRUMENTERS:
            parser.error(f"unknown instrumenter {instrumenter!r}")
    try:
        n_list = _parse_counts(args.n)
    except ValueError as exc:
        parser.error(str(exc))

    def progress(instrumenter, case_label, n):
        print(f"done: {instrumenter:>8} {case_label} N={n}", file=sys.stderr)

    try:
        rows = run_matrix(
            instrumenters,
            cases,
            n_list,
            args.reps,
            args.out,
            args.outdir,
            interleave=args.interleave,
            progress=progress,
        )
    except KernelError as exc:
        print(f"tracelet-bench: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {rows} samples to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
