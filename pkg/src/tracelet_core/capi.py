"""Flat, C-style foreign interface to the measurement core.

This is the surface host instrumenters call into. Calling conventions follow
C bindings rather than Python idiom: no exceptions cross this boundary,
status is an int (0 = success, see errors.TL_*), handle-returning calls
yield a non-negative id or a negated error code. String arguments may be
str or UTF-8 bytes; bytes are truncated at the first NUL.

    tl_init(config_json)                      -> i32
    tl_region(name, group, file, line, kind)  -> i64
    tl_location(label)                        -> i64
    tl_enter(location_id, region_id)          -> i32
    tl_exit(location_id, region_id)           -> i32
    tl_finalize()                             -> i32

tl_init accepts a JSON object with keys substrates, output_dir,
instrumenter_label and buffer_capacity; missing keys fall back to the
TRACELET_SUBSTRATES / TRACELET_OUT / TRACELET_BUFCAP environment variables.
`kind` is 0 (interpreted) or 1 (native); the string forms are accepted too.
"""

import json

from . import core
from .errors import (
    TL_ERROR,
    TL_INVALID_ARGUMENT,
    TL_NOT_INITIALIZED,
    TL_SUCCESS,
    MeasurementError,
)
from .model import RegionKind

_KIND_CODES = {0: RegionKind.INTERPRETED, 1: RegionKind.NATIVE}


def _text(value) -> str:
    if isinstance(value, bytes):
        nul = value.find(b"\0")
        if nul != -1:
            value = value[:nul]
        return value.decode("utf-8")
    if isinstance(value, str):
        return value
    raise TypeError(f"expected str or bytes, got {type(value).__name__}")


def _kind(value) -> RegionKind:
    if isinstance(value, int) and not isinstance(value, bool):
        try:
            return _KIND_CODES[value]
        except KeyError:
            raise ValueError(f"kind code out of range: {value}") from None
    return RegionKind(_text(value))


def tl_init(config_json) -> int:
    """Initialize the measurement from a UTF-8 JSON config; 0 on success."""
    try:
        raw = _text(config_json)
        mapping = json.loads(raw) if raw.strip() else {}
        if not isinstance(mapping, dict):
            return TL_INVALID_ARGUMENT
        config = core.MeasurementConfig.from_mapping(mapping)
        core.init(config)
        return TL_SUCCESS
    except MeasurementError as exc:
        return exc.code
    except (TypeError, ValueError):
        return TL_INVALID_ARGUMENT
    except Exception:
        return TL_ERROR


def tl_region(name, group, source_file, line_begin, kind) -> int:
    """Intern a region; returns its id, or a negated error code."""
    measurement = core.current()
    if measurement is None:
        return -TL_NOT_INITIALIZED
    try:
        return measurement.region_register(
            _text(name), _text(group), _text(source_file), int(line_begin), _kind(kind)
        )
    except MeasurementError as exc:
        return -exc.code
    except (TypeError, ValueError):
        return -TL_INVALID_ARGUMENT
    except Exception:
        return -TL_ERROR


def tl_location(label) -> int:
    """Acquire the calling thread's location; returns its id or a negated error code."""
    measurement = core.current()
    if measurement is None:
        return -TL_NOT_INITIALIZED
    try:
        return measurement.location_acquire(_text(label))
    except MeasurementError as exc:
        return -exc.code
    except (TypeError, ValueError):
        return -TL_INVALID_ARGUMENT
    except Exception:
        return -TL_ERROR


def tl_enter(location_id, region_id) -> int:
    measurement = core.current()
    if measurement is None:
        return TL_NOT_INITIALIZED
    try:
        measurement.enter(location_id, region_id)
        return TL_SUCCESS
    except MeasurementError as exc:
        return exc.code
    except Exception:
        return TL_ERROR


def tl_exit(location_id, region_id) -> int:
    measurement = core.current()
    if measurement is None:
        return TL_NOT_INITIALIZED
    try:
        measurement.exit(location_id, region_id)
        return TL_SUCCESS
    except MeasurementError as exc:
        return exc.code
    except Exception:
        return TL_ERROR


def tl_finalize() -> int:
    try:
        core.finalize()
        return TL_SUCCESS
    except MeasurementError as exc:
        return exc.code
    except Exception:
        return TL_ERROR
