"""Measurement core: region enter/exit recording into trace and profile substrates.

Typical in-process use::

    from tracelet_core import MeasurementConfig, init

    m = init(MeasurementConfig(substrates={"trace", "profile"}, output_dir="out"))
    loc = m.location_acquire("MainThread")
    region = m.region_register("work", "__main__", "job.py", 12)
    m.enter(loc, region)
    ...
    m.exit(loc, region)
    m.finalize()

Host instrumenters embedded in an interpreter use the flat functions in
`tracelet_core.capi` instead.
"""

from .analysis import (
    BenchmarkSample,
    OverheadDelta,
    OverheadModel,
    compare_overheads,
    dump_trace_lines,
    fit_all,
    fit_overhead,
    format_model,
    read_samples_csv,
)
from .core import (
    DEFAULT_BUFFER_CAPACITY,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SUBSTRATES,
    VALID_SUBSTRATES,
    Measurement,
    MeasurementConfig,
    MeasurementSummary,
    current,
    finalize,
    init,
)
from .errors import (
    AlreadyInitializedError,
    InsufficientDataError,
    InvalidConfigError,
    MeasurementError,
    NotInitializedError,
    OutputDirUnwritableError,
    ParseError,
    UnknownLocationError,
    UnknownRegionError,
)
from .model import Event, EventKind, LocationRecord, RegionDescriptor, RegionKind
from .profiling import CallPathNode, CallPathProfile, flatten_paths, read_profile
from .tracing import TraceArchive, TraceEvent, TraceWriter, read_archive, write_archive

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSample",
    "OverheadDelta",
    "OverheadModel",
    "compare_overheads",
    "dump_trace_lines",
    "fit_all",
    "fit_overhead",
    "format_model",
    "read_samples_csv",
    "DEFAULT_BUFFER_CAPACITY",
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_SUBSTRATES",
    "VALID_SUBSTRATES",
    "Measurement",
    "MeasurementConfig",
    "MeasurementSummary",
    "current",
    "finalize",
    "init",
    "AlreadyInitializedError",
    "InsufficientDataError",
    "InvalidConfigError",
    "MeasurementError",
    "NotInitializedError",
    "OutputDirUnwritableError",
    "ParseError",
    "UnknownLocationError",
    "UnknownRegionError",
    "Event",
    "EventKind",
    "LocationRecord",
    "RegionDescriptor",
    "RegionKind",
    "CallPathNode",
    "CallPathProfile",
    "flatten_paths",
    "read_profile",
    "TraceArchive",
    "TraceEvent",
    "TraceWriter",
    "read_archive",
    "write_archive",
]
