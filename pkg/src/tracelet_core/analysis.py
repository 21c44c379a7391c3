"""Offline analysis: archive dumps, profile tables, and runtime decomposition.

The decomposition fits t = alpha + beta * N to per-iteration-count medians:
alpha is the constant cost of enabling instrumentation for one run, beta the
added cost of one loop iteration.
"""

import csv
import statistics
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InsufficientDataError, ParseError
from .model import EventKind
from .profiling import flatten_paths
from .tracing import TraceArchive

SAMPLES_HEADER = ("instrumenter", "case", "iterations", "repetition", "runtime_s")

SORT_KEYS = ("inclusive", "exclusive", "visits")


@dataclass(frozen=True)
class BenchmarkSample:
    instrumenter: str
    case: str
    iterations: int
    repetition: int
    runtime_s: float


@dataclass(frozen=True)
class OverheadModel:
    """Fitted decomposition of one (instrumenter, case) group."""

    alpha_s: float
    beta_s: float
    instrumenter: str = ""
    case: str = ""
    n_points: int = 0


@dataclass(frozen=True)
class OverheadDelta:
    dalpha_s: float
    dbeta_s: float


def read_samples_csv(path) -> list[BenchmarkSample]:
    """Parse a samples CSV with the fixed column order of SAMPLES_HEADER."""
    samples = []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(path, "samples file not found") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != SAMPLES_HEADER:
            raise ParseError(path, f"expected header {','.join(SAMPLES_HEADER)}", 1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(SAMPLES_HEADER):
                raise ParseError(path, f"expected {len(SAMPLES_HEADER)} columns, got {len(row)}", lineno)
            try:
                sample = BenchmarkSample(
                    instrumenter=row[0],
                    case=row[1],
                    iterations=int(row[2]),
                    repetition=int(row[3]),
                    runtime_s=float(row[4]),
                )
            except ValueError as exc:
                raise ParseError(path, str(exc), lineno) from None
            if sample.iterations < 1 or sample.runtime_s <= 0:
                raise ParseError(path, "iterations must be >= 1 and runtime_s > 0", lineno)
            samples.append(sample)
    return samples


def fit_overhead(samples: Iterable[BenchmarkSample], group: tuple[str, str] | None = None) -> OverheadModel:
    """Fit t = alpha + beta*N over per-N medians of one sample group.

    `group` is an (instrumenter, case) pair used to filter `samples`; when
    omitted, the samples must already be homogeneous. Medians use the
    mean-of-middles convention for even repetition counts. Raises
    InsufficientDataError unless two distinct N values are present.
    """
    pool = list(samples)
    if group is not None:
        label, case = group
        pool = [s for s in pool if s.instrumenter == label and s.case == case]
    else:
        groups = {(s.instrumenter, s.case) for s in pool}
        if len(groups) > 1:
            raise ValueError(f"samples mix {len(groups)} groups; pass group=")
    if not pool:
        raise InsufficientDataError(f"no samples for group {group}")

    by_n: dict[int, list[float]] = {}
    for sample in pool:
        by_n.setdefault(sample.iterations, []).append(sample.runtime_s)
    if len(by_n) < 2:
        raise InsufficientDataError(
            f"need >= 2 distinct iteration counts, got {sorted(by_n)}"
        )

    # Deferred so merely importing the package (e.g. from the interpreter
    # hooks, where startup lands in the measured constant term) stays cheap.
    import numpy as np

    ns = sorted(by_n)
    medians = [statistics.median(by_n[n]) for n in ns]
    beta, alpha = np.polyfit(np.asarray(ns, dtype=float), np.asarray(medians, dtype=float), 1)
    return OverheadModel(
        alpha_s=float(alpha),
        beta_s=float(beta),
        instrumenter=pool[0].instrumenter,
        case=pool[0].case,
        n_points=len(ns),
    )


def fit_all(samples: Iterable[BenchmarkSample]) -> list[OverheadModel]:
    """Fit every (instrumenter, case) group, in first-appearance order."""
    pool = list(samples)
    seen: list[tuple[str, str]] = []
    for sample in pool:
        key = (sample.instrumenter, sample.case)
        if key not in seen:
            seen.append(key)
    return [fit_overhead(pool, group) for group in seen]


def compare_overheads(model_a: OverheadModel, model_b: OverheadModel) -> OverheadDelta:
    """Delta a - b of the fitted constants."""
    return OverheadDelta(
        dalpha_s=model_a.alpha_s - model_b.alpha_s,
        dbeta_s=model_a.beta_s - model_b.beta_s,
    )


def format_alpha(alpha_s: float) -> str:
    return f"{alpha_s:.2f} s"


def format_beta(beta_s: float) -> str:
    us = beta_s * 1e6
    return f"{us:.1f} us" if abs(us) >= 1 else f"{us:.2f} us"


def format_model(model: OverheadModel) -> str:
    """Render alpha and beta the way the results table prints them, e.g. '0.58 s & 15.0 us'."""
    return f"{format_alpha(model.alpha_s)} & {format_beta(model.beta_s)}"


# -- trace dump -------------------------------------------------------------

_EVENT_WORD = {EventKind.ENTER: "ENTER", EventKind.LEAVE: "LEAVE"}


def dump_trace_lines(archive: TraceArchive) -> Iterator[str]:
    """Human-readable, chronological per-location listing of an archive."""
    total = sum(len(stream) for stream in archive.events.values())
    yield (
        f"# archive: {len(archive.regions)} regions, "
        f"{len(archive.locations)} locations, {total} events"
    )
    regions = archive.region_by_id()
    for location in sorted(archive.locations, key=lambda l: l.id):
        stream = archive.events.get(location.id, [])
        yield f"# location {location.id} ({location.label}): {len(stream)} events"
        for event in stream:
            region = regions[event.region_id]
            line = f"{event.ts:>12}  {_EVENT_WORD[event.kind]}  {region.label}"
            if region.source_file:
                line += f" ({region.source_file}:{region.line_begin})"
            yield line


# -- profile report ---------------------------------------------------------

@dataclass(frozen=True)
class ProfileRow:
    path: tuple[str, ...]
    visits: int
    inclusive_ns: int
    exclusive_ns: int


def profile_rows(profile_doc: dict, regions_by_id: dict | None = None) -> list[ProfileRow]:
    """Flatten the merged tree of a profile document into per-path rows.

    Region ids are rendered through `regions_by_id` labels when available.
    """

    def label(region_id: int) -> str:
        if regions_by_id and region_id in regions_by_id:
            return regions_by_id[region_id].label
        return f"region-{region_id}"

    rows = []
    for path, (visits, inclusive, exclusive) in flatten_paths(profile_doc["root"]).items():
        rows.append(ProfileRow(tuple(label(r) for r in path), visits, inclusive, exclusive))
    return rows


def sort_rows(rows: list[ProfileRow], sort_key: str) -> list[ProfileRow]:
    """Sort descending by the chosen key; ties break by path lexicographically."""
    if sort_key not in SORT_KEYS:
        raise ValueError(f"sort key must be one of {SORT_KEYS}, got {sort_key!r}")
    attr = {"inclusive": "inclusive_ns", "exclusive": "exclusive_ns", "visits": "visits"}[sort_key]
    return sorted(rows, key=lambda row: (-getattr(row, attr), row.path))


def render_report(rows: list[ProfileRow], sort_key: str = "inclusive") -> str:
    ordered = sort_rows(rows, sort_key)
    lines = [f"{'VISITS':>8}  {'INCLUSIVE_NS':>14}  {'EXCLUSIVE_NS':>14}  PATH"]
    for row in ordered:
        lines.append(
            f"{row.visits:>8}  {row.inclusive_ns:>14}  {row.exclusive_ns:>14}  {'/'.join(row.path)}"
        )
    return "\n".join(lines)
