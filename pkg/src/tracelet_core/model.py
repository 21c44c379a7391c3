"""Domain records shared by the measurement core and its substrates."""

import enum
from dataclasses import dataclass

# Nanoseconds since the measurement epoch (fixed at init).
Timestamp = int


class RegionKind(str, enum.Enum):
    INTERPRETED = "interpreted"
    NATIVE = "native"


class EventKind(str, enum.Enum):
    ENTER = "E"
    LEAVE = "L"


@dataclass(frozen=True)
class RegionDescriptor:
    """Interned definition of an instrumentable code region."""

    id: int
    name: str
    group: str
    source_file: str
    line_begin: int
    kind: RegionKind

    @property
    def label(self) -> str:
        """Display label: module toplevels collapse to their group name."""
        if self.name == "<module>":
            return self.group
        return f"{self.group}:{self.name}"


@dataclass(frozen=True)
class LocationRecord:
    id: int
    label: str


@dataclass(frozen=True)
class Event:
    """Timestamped enter/leave record bound to a region and a location."""

    kind: EventKind
    region_id: int
    location_id: int
    ts: Timestamp
