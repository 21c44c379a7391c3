"""Trace substrate: per-location JSON-lines event streams plus a definitions document.

On-disk layout of an archive directory:

* ``definitions.json``  -- regions and locations, written once at finalize
* ``events-<loc>.jsonl`` -- one ``{"k":"E"|"L","r":<region>,"t":<ns>}`` object
  per line, in arrival order; the location id lives in the file name only
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .model import Event, EventKind, LocationRecord, RegionDescriptor, RegionKind

DEFINITIONS_FILENAME = "definitions.json"
_EVENTS_FILE_RE = re.compile(r"^events-(\d+)\.jsonl$")


def events_filename(location_id: int) -> str:
    return f"events-{location_id}.jsonl"


def _event_line(kind: EventKind, region_id: int, ts: int) -> str:
    return f'{{"k":"{kind.value}","r":{region_id},"t":{ts}}}\n'


class TraceWriter:
    """Buffers events per location and appends them to that location's stream file.

    A location's buffer is flushed once it reaches `buffer_capacity` and at
    finalize; locations that never produced an event get no file. One writer
    instance serves one measurement; distinct locations may flush concurrently
    because each touches only its own buffer and file handle.
    """

    def __init__(self, out_dir, buffer_capacity: int):
        self._dir = Path(out_dir)
        self._capacity = buffer_capacity
        self._buffers: dict[int, list[str]] = {}
        self._files: dict[int, object] = {}

    def on_event(self, event: Event) -> None:
        buf = self._buffers.get(event.location_id)
        if buf is None:
            buf = self._buffers[event.location_id] = []
        buf.append(_event_line(event.kind, event.region_id, event.ts))
        if len(buf) >= self._capacity:
            self._flush(event.location_id)

    def _flush(self, location_id: int) -> None:
        buf = self._buffers[location_id]
        if not buf:
            return
        fh = self._files.get(location_id)
        if fh is None:
            path = self._dir / events_filename(location_id)
            fh = self._files[location_id] = open(path, "w", encoding="utf-8", newline="")
        fh.write("".join(buf))
        buf.clear()

    def finalize(self, regions, locations) -> list[Path]:
        """Flush all buffers, close stream files, and write definitions.json."""
        written = []
        for location_id in self._buffers:
            self._flush(location_id)
        for location_id, fh in self._files.items():
            fh.close()
            written.append(self._dir / events_filename(location_id))
        self._files.clear()
        written.append(write_definitions(self._dir, regions, locations))
        return written


def write_definitions(out_dir, regions, locations) -> Path:
    doc = {
        "regions": [
            {
                "id": r.id,
                "name": r.name,
                "group": r.group,
                "file": r.source_file,
                "line": r.line_begin,
                "kind": r.kind.value,
            }
            for r in regions
        ],
        "locations": [{"id": l.id, "label": l.label} for l in locations],
    }
    path = Path(out_dir) / DEFINITIONS_FILENAME
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


@dataclass(frozen=True)
class TraceEvent:
    """One parsed event line; the owning location is implied by the stream."""

    kind: EventKind
    region_id: int
    ts: int


@dataclass
class TraceArchive:
    """Parsed archive: definitions plus one ordered event stream per location."""

    regions: list[RegionDescriptor] = field(default_factory=list)
    locations: list[LocationRecord] = field(default_factory=list)
    events: dict[int, list[TraceEvent]] = field(default_factory=dict)

    def region_by_id(self) -> dict[int, RegionDescriptor]:
        return {r.id: r for r in self.regions}


def write_archive(archive: TraceArchive, out_dir) -> list[Path]:
    """Serialize an in-memory archive; locations with empty streams get no file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for location_id, stream in archive.events.items():
        if not stream:
            continue
        path = out / events_filename(location_id)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("".join(_event_line(e.kind, e.region_id, e.ts) for e in stream))
        written.append(path)
    written.append(write_definitions(out, archive.regions, archive.locations))
    return written


def _require(obj, key, types, path, line=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(path, f"missing key {key!r}", line)
    value = obj[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise ParseError(path, f"key {key!r} has unexpected type {type(value).__name__}", line)
    return value


def _parse_definitions(path: Path) -> tuple[list[RegionDescriptor], list[LocationRecord]]:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(path, "definitions document not found") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno) from None

    regions = []
    for entry in _require(doc, "regions", list, path):
        try:
            kind = RegionKind(_require(entry, "kind", str, path))
        except ValueError:
            raise ParseError(path, f"unknown region kind {entry.get('kind')!r}") from None
        regions.append(
            RegionDescriptor(
                id=_require(entry, "id", int, path),
                name=_require(entry, "name", str, path),
                group=_require(entry, "group", str, path),
                source_file=_require(entry, "file", str, path),
                line_begin=_require(entry, "line", int, path),
                kind=kind,
            )
        )
    locations = [
        LocationRecord(id=_require(entry, "id", int, path), label=_require(entry, "label", str, path))
        for entry in _require(doc, "locations", list, path)
    ]
    return regions, locations


def read_definitions(archive_dir) -> tuple[list[RegionDescriptor], list[LocationRecord]]:
    """Parse only the definitions document of an archive."""
    return _parse_definitions(Path(archive_dir) / DEFINITIONS_FILENAME)


def read_archive(archive_dir) -> TraceArchive:
    """Parse an archive directory back into a TraceArchive.

    Rejects events that reference undefined regions or locations and streams
    whose timestamps decrease, naming the offending file and line.
    """
    root = Path(archive_dir)
    regions, locations = _parse_definitions(root / DEFINITIONS_FILENAME)
    region_ids = {r.id for r in regions}
    location_ids = {l.id for l in locations}

    events: dict[int, list[TraceEvent]] = {loc_id: [] for loc_id in sorted(location_ids)}
    for path in sorted(root.iterdir()):
        match = _EVENTS_FILE_RE.match(path.name)
        if match is None:
            continue
        location_id = int(match.group(1))
        if location_id not in location_ids:
            raise ParseError(path, f"stream for undefined location {location_id}")
        stream = events[location_id]
        last_ts = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    raise ParseError(path, "blank event line", lineno)
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(path, exc.msg, lineno) from None
                kind_str = _require(obj, "k", str, path, lineno)
                try:
                    kind = EventKind(kind_str)
                except ValueError:
                    raise ParseError(path, f"unknown event kind {kind_str!r}", lineno) from None
                region_id = _require(obj, "r", int, path, lineno)
                ts = _require(obj, "t", int, path, lineno)
                if region_id not in region_ids:
                    raise ParseError(path, f"event references undefined region {region_id}", lineno)
                if ts < last_ts:
                    raise ParseError(path, f"timestamp {ts} decreases (previous {last_ts})", lineno)
                last_ts = ts
                stream.append(TraceEvent(kind, region_id, ts))
    return TraceArchive(regions=regions, locations=locations, events=events)
