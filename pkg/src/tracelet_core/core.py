"""Measurement lifecycle: region registry, per-thread locations, clock, event dispatch.

One measurement may be active per process. Events flow even when every
recording substrate is disabled (substrates={"none"}); that mode exists to
measure pure instrumentation cost.
"""

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    AlreadyInitializedError,
    InvalidConfigError,
    NotInitializedError,
    OutputDirUnwritableError,
    UnknownLocationError,
    UnknownRegionError,
)
from .model import Event, EventKind, LocationRecord, RegionDescriptor, RegionKind
from .profiling import CallPathProfile
from .tracing import TraceWriter, write_definitions

VALID_SUBSTRATES = frozenset({"trace", "profile", "none"})
DEFAULT_SUBSTRATES = frozenset({"trace", "profile"})
DEFAULT_OUTPUT_DIR = "tracelet-out"
DEFAULT_BUFFER_CAPACITY = 4096

ENV_OUTPUT_DIR = "TRACELET_OUT"
ENV_SUBSTRATES = "TRACELET_SUBSTRATES"
ENV_BUFFER_CAPACITY = "TRACELET_BUFCAP"

METADATA_FILENAME = "metadata.json"

# Files a finalized measurement may leave behind; removed at init so one
# output directory can be reused without mixing runs.
_OUTPUT_PATTERNS = ("metadata.json", "definitions.json", "profile.json", "events-*.jsonl")


@dataclass(frozen=True)
class MeasurementConfig:
    """Validated measurement parameters.

    substrates is a non-empty subset of {"trace", "profile", "none"};
    "none" cannot be combined with a recording substrate.
    """

    substrates: frozenset = DEFAULT_SUBSTRATES
    output_dir: str = DEFAULT_OUTPUT_DIR
    instrumenter_label: str = "api"
    buffer_capacity: int = DEFAULT_BUFFER_CAPACITY

    def __post_init__(self):
        substrates = frozenset(self.substrates)
        object.__setattr__(self, "substrates", substrates)
        if not substrates:
            raise InvalidConfigError("substrates must not be empty")
        unknown = substrates - VALID_SUBSTRATES
        if unknown:
            raise InvalidConfigError(f"unknown substrates: {sorted(unknown)}")
        if "none" in substrates and len(substrates) > 1:
            raise InvalidConfigError("'none' cannot be combined with recording substrates")
        if not isinstance(self.buffer_capacity, int) or self.buffer_capacity < 1:
            raise InvalidConfigError("buffer_capacity must be a positive integer")

    @classmethod
    def from_mapping(cls, mapping, env=None) -> "MeasurementConfig":
        """Build a config from a plain mapping with environment fallback.

        Recognized keys: substrates (list or comma string), output_dir,
        instrumenter_label, buffer_capacity. Missing keys fall back to
        TRACELET_SUBSTRATES, TRACELET_OUT and TRACELET_BUFCAP, then to the
        defaults.
        """
        env = os.environ if env is None else env
        mapping = dict(mapping or {})
        unknown = set(mapping) - {"substrates", "output_dir", "instrumenter_label", "buffer_capacity"}
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")

        substrates = mapping.get("substrates", env.get(ENV_SUBSTRATES))
        if substrates is None:
            substrates = DEFAULT_SUBSTRATES
        elif isinstance(substrates, str):
            substrates = [s.strip() for s in substrates.split(",") if s.strip()]

        capacity = mapping.get("buffer_capacity", env.get(ENV_BUFFER_CAPACITY))
        if capacity is None:
            capacity = DEFAULT_BUFFER_CAPACITY
        elif not isinstance(capacity, int) or isinstance(capacity, bool):
            try:
                capacity = int(str(capacity))
            except ValueError:
                raise InvalidConfigError(f"buffer_capacity is not an integer: {capacity!r}") from None

        return cls(
            substrates=frozenset(substrates),
            output_dir=str(mapping.get("output_dir", env.get(ENV_OUTPUT_DIR, DEFAULT_OUTPUT_DIR))),
            instrumenter_label=str(mapping.get("instrumenter_label", "api")),
            buffer_capacity=capacity,
        )


class RegionRegistry:
    """Interning registry; ids are dense in first-registration order."""

    def __init__(self):
        self._by_key: dict[tuple, int] = {}
        self._regions: list[RegionDescriptor] = []
        self._lock = threading.Lock()

    def register(self, name, group, source_file, line_begin, kind) -> int:
        kind = RegionKind(kind)
        key = (name, group, source_file, line_begin, kind)
        region_id = self._by_key.get(key)  # lock-free fast path; dict reads are atomic
        if region_id is not None:
            return region_id
        with self._lock:
            region_id = self._by_key.get(key)
            if region_id is None:
                region_id = len(self._regions)
                self._regions.append(
                    RegionDescriptor(region_id, name, group, source_file, line_begin, kind)
                )
                self._by_key[key] = region_id
            return region_id

    def __len__(self) -> int:
        return len(self._regions)

    def __iter__(self):
        return iter(list(self._regions))

    def get(self, region_id: int) -> RegionDescriptor:
        if not 0 <= region_id < len(self._regions):
            raise UnknownRegionError(f"region {region_id} was never registered")
        return self._regions[region_id]


class LocationHandle:
    """Per-thread event stream owner."""

    __slots__ = ("id", "thread_label", "event_count", "_open_regions")

    def __init__(self, location_id: int, thread_label: str):
        self.id = location_id
        self.thread_label = thread_label
        self.event_count = 0
        self._open_regions: list[int] = []


@dataclass
class MeasurementSummary:
    regions: int
    locations: int
    events: int

    def as_dict(self) -> dict:
        return {"regions": self.regions, "locations": self.locations, "events": self.events}


class Measurement:
    """An active measurement; obtain via init(), release via finalize()."""

    def __init__(self, config: MeasurementConfig):
        self.config = config
        self.output_dir = Path(config.output_dir)
        _prepare_output_dir(self.output_dir)

        self.epoch_unix_ns = time.time_ns()
        self._mono_epoch = time.monotonic_ns()
        self.registry = RegionRegistry()
        self._locations: list[LocationHandle] = []
        self._location_lock = threading.Lock()
        self._tls = threading.local()
        self._trace = (
            TraceWriter(self.output_dir, config.buffer_capacity)
            if "trace" in config.substrates
            else None
        )
        self._profile = CallPathProfile() if "profile" in config.substrates else None
        self._active = True

    # -- clock ------------------------------------------------------------

    def now(self) -> int:
        """Nanoseconds since the measurement epoch (monotonic)."""
        return time.monotonic_ns() - self._mono_epoch

    # -- definitions ------------------------------------------------------

    def region_register(self, name, group, source_file="", line_begin=0, kind=RegionKind.INTERPRETED) -> int:
        self._check_active()
        return self.registry.register(name, group, source_file, line_begin, kind)

    def location_acquire(self, thread_label: str) -> int:
        """Return the calling thread's location id, creating it on first use."""
        self._check_active()
        location_id = getattr(self._tls, "location_id", None)
        if location_id is None:
            with self._location_lock:
                location_id = len(self._locations)
                self._locations.append(LocationHandle(location_id, thread_label))
            self._tls.location_id = location_id
        return location_id

    def locations(self) -> list[LocationRecord]:
        with self._location_lock:
            return [LocationRecord(l.id, l.thread_label) for l in self._locations]

    # -- events -----------------------------------------------------------

    def enter(self, location_id: int, region_id: int) -> None:
        if not self._active:
            raise NotInitializedError("no measurement active")
        location = self._location(location_id)
        self._check_region(region_id)
        ts = time.monotonic_ns() - self._mono_epoch
        location._open_regions.append(region_id)
        location.event_count += 1
        if self._trace is not None or self._profile is not None:
            event = Event(EventKind.ENTER, region_id, location_id, ts)
            if self._trace is not None:
                self._trace.on_event(event)
            if self._profile is not None:
                self._profile.on_event(event)

    def exit(self, location_id: int, region_id: int) -> None:
        if not self._active:
            raise NotInitializedError("no measurement active")
        location = self._location(location_id)
        self._check_region(region_id)
        if not location._open_regions:
            return  # unmatched exit (hook installed mid-stack): dropped
        location._open_regions.pop()
        ts = time.monotonic_ns() - self._mono_epoch
        location.event_count += 1
        if self._trace is not None or self._profile is not None:
            event = Event(EventKind.LEAVE, region_id, location_id, ts)
            if self._trace is not None:
                self._trace.on_event(event)
            if self._profile is not None:
                self._profile.on_event(event)

    # -- lifecycle --------------------------------------------------------

    def finalize(self) -> MeasurementSummary:
        """Flush buffers, serialize substrate outputs, and deactivate."""
        self._check_active()
        finalize_ts = self.now()
        # Unmatched enters are closed synthetically so profiles stay
        # consistent; the trace keeps only events that actually happened.
        for location in self._locations:
            while location._open_regions:
                region_id = location._open_regions.pop()
                if self._profile is not None:
                    self._profile.on_event(
                        Event(EventKind.LEAVE, region_id, location.id, finalize_ts)
                    )

        regions = list(self.registry)
        locations = self.locations()
        if self._trace is not None:
            self._trace.finalize(regions, locations)
        elif self._profile is not None:
            # No trace substrate to own definitions.json, but reports still
            # need region names next to profile.json.
            write_definitions(self.output_dir, regions, locations)
        if self._profile is not None:
            self._profile.write(self.output_dir)
        self._write_metadata()

        self._active = False
        global _current
        with _state_lock:
            if _current is self:
                _current = None
        return MeasurementSummary(
            regions=len(regions),
            locations=len(locations),
            events=sum(l.event_count for l in self._locations),
        )

    def _write_metadata(self) -> None:
        doc = {
            "instrumenter": self.config.instrumenter_label,
            "substrates": sorted(self.config.substrates),
            "clock_unit": "ns",
            "epoch_unix_ns": self.epoch_unix_ns,
        }
        path = self.output_dir / METADATA_FILENAME
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

    # -- helpers ----------------------------------------------------------

    def _check_active(self) -> None:
        if not self._active:
            raise NotInitializedError("no measurement active")

    def _location(self, location_id: int) -> LocationHandle:
        if not 0 <= location_id < len(self._locations):
            raise UnknownLocationError(f"location {location_id} was never acquired")
        return self._locations[location_id]

    def _check_region(self, region_id: int) -> None:
        if not 0 <= region_id < len(self.registry):
            raise UnknownRegionError(f"region {region_id} was never registered")


def _prepare_output_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputDirUnwritableError(f"cannot create output dir {path}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise OutputDirUnwritableError(f"output dir {path} is not writable")
    for pattern in _OUTPUT_PATTERNS:
        for stale in path.glob(pattern):
            stale.unlink()


_current: Measurement | None = None
_state_lock = threading.Lock()


def init(config: MeasurementConfig) -> Measurement:
    """Start the process-wide measurement; exactly one may be active."""
    global _current
    with _state_lock:
        if _current is not None:
            raise AlreadyInitializedError("a measurement is already active")
        measurement = Measurement(config)
        _current = measurement
        return measurement


def current() -> Measurement | None:
    return _current


def finalize() -> MeasurementSummary:
    """Finalize the active measurement; raises NotInitializedError if none."""
    measurement = _current
    if measurement is None:
        raise NotInitializedError("no measurement active")
    return measurement.finalize()
