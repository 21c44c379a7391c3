import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracelet_core import ParseError, TraceArchive, TraceEvent, TraceWriter
from tracelet_core.model import Event, EventKind, LocationRecord, RegionDescriptor, RegionKind
from tracelet_core.tracing import read_archive, write_archive, write_definitions
from generators import random_archive


def region(i, **overrides):
    fields = {"name": f"fn{i}", "group": "__main__", "source_file": "run.py",
              "line_begin": i, "kind": RegionKind.INTERPRETED}
    fields.update(overrides)
    return RegionDescriptor(i, **fields)


class TestWriter:
    def test_event_line_is_exact_json(self, tmp_path):
        writer = TraceWriter(tmp_path, buffer_capacity=1)
        writer.on_event(Event(EventKind.ENTER, 2, 0, 1500))
        writer.on_event(Event(EventKind.LEAVE, 2, 0, 1700))
        writer.finalize([region(0), region(1), region(2)], [LocationRecord(0, "MainThread")])
        lines = (tmp_path / "events-0.jsonl").read_text().splitlines()
        assert lines == ['{"k":"E","r":2,"t":1500}', '{"k":"L","r":2,"t":1700}']

    def test_buffered_flush_preserves_arrival_order(self, tmp_path):
        writer = TraceWriter(tmp_path, buffer_capacity=16)
        timestamps = list(range(0, 100, 2))
        for ts in timestamps:
            writer.on_event(Event(EventKind.ENTER, 0, 0, ts))
        writer.finalize([region(0)], [LocationRecord(0, "MainThread")])
        got = [json.loads(l)["t"] for l in (tmp_path / "events-0.jsonl").read_text().splitlines()]
        assert got == timestamps

    def test_line_count_matches_generated_events(self, tmp_path):
        rng = random.Random(7)
        writer = TraceWriter(tmp_path, buffer_capacity=256)
        n_events = 10_000
        for i in range(n_events):
            kind = EventKind.ENTER if rng.random() < 0.5 else EventKind.LEAVE
            writer.on_event(Event(kind, rng.randrange(3), rng.randrange(2), i))
        writer.finalize(
            [region(0), region(1), region(2)],
            [LocationRecord(0, "a"), LocationRecord(1, "b")],
        )
        total = sum(
            len((tmp_path / f"events-{loc}.jsonl").read_text().splitlines()) for loc in (0, 1)
        )
        assert total == n_events

    def test_empty_run_writes_definitions_only(self, tmp_path):
        writer = TraceWriter(tmp_path, buffer_capacity=8)
        writer.finalize([], [])
        doc = json.loads((tmp_path / "definitions.json").read_text())
        assert doc == {"regions": [], "locations": []}
        assert list(tmp_path.glob("events-*.jsonl")) == []


class TestRoundTrip:
    def test_write_then_read_identity(self, tmp_path):
        rng = random.Random(21)
        archive = random_archive(rng, total_events=500)
        write_archive(archive, tmp_path)
        assert read_archive(tmp_path) == archive

    def test_event_less_location_round_trips(self, tmp_path):
        archive = TraceArchive(
            regions=[region(0)],
            locations=[LocationRecord(0, "main"), LocationRecord(1, "idle")],
            events={0: [TraceEvent(EventKind.ENTER, 0, 5)], 1: []},
        )
        write_archive(archive, tmp_path)
        assert not (tmp_path / "events-1.jsonl").exists()
        assert read_archive(tmp_path) == archive

    @settings(max_examples=40)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_round_trip_property(self, seed):
        import tempfile

        rng = random.Random(seed)
        archive = random_archive(rng, max_regions=6, max_locations=3, total_events=rng.randint(0, 60))
        with tempfile.TemporaryDirectory() as tmp:
            write_archive(archive, tmp)
            assert read_archive(tmp) == archive


class TestReaderDiagnostics:
    def write_base(self, tmp_path, n_regions=2, locations=(0,)):
        write_definitions(
            tmp_path,
            [region(i) for i in range(n_regions)],
            [LocationRecord(i, f"t{i}") for i in locations],
        )

    def test_missing_definitions(self, tmp_path):
        with pytest.raises(ParseError, match="definitions"):
            read_archive(tmp_path)

    def test_undefined_region_reference_names_line(self, tmp_path):
        self.write_base(tmp_path)
        (tmp_path / "events-0.jsonl").write_text(
            '{"k":"E","r":0,"t":1}\n{"k":"E","r":9,"t":2}\n'
        )
        with pytest.raises(ParseError) as exc_info:
            read_archive(tmp_path)
        assert exc_info.value.line == 2
        assert "undefined region 9" in str(exc_info.value)

    def test_corrupt_line_names_line(self, tmp_path):
        self.write_base(tmp_path)
        (tmp_path / "events-0.jsonl").write_text('{"k":"E","r":0,"t":1}\nnot json\n')
        with pytest.raises(ParseError) as exc_info:
            read_archive(tmp_path)
        assert exc_info.value.line == 2

    def test_missing_key_names_line(self, tmp_path):
        self.write_base(tmp_path)
        (tmp_path / "events-0.jsonl").write_text('{"k":"E","t":1}\n')
        with pytest.raises(ParseError) as exc_info:
            read_archive(tmp_path)
        assert exc_info.value.line == 1

    def test_decreasing_timestamp_rejected(self, tmp_path):
        self.write_base(tmp_path)
        (tmp_path / "events-0.jsonl").write_text(
            '{"k":"E","r":0,"t":10}\n{"k":"L","r":0,"t":3}\n'
        )
        with pytest.raises(ParseError) as exc_info:
            read_archive(tmp_path)
        assert exc_info.value.line == 2

    def test_stream_for_undefined_location(self, tmp_path):
        self.write_base(tmp_path, locations=(0,))
        (tmp_path / "events-5.jsonl").write_text('{"k":"E","r":0,"t":1}\n')
        with pytest.raises(ParseError, match="undefined location 5"):
            read_archive(tmp_path)

    def test_unknown_event_kind(self, tmp_path):
        self.write_base(tmp_path)
        (tmp_path / "events-0.jsonl").write_text('{"k":"X","r":0,"t":1}\n')
        with pytest.raises(ParseError, match="unknown event kind"):
            read_archive(tmp_path)

    def test_bad_region_kind_in_definitions(self, tmp_path):
        (tmp_path / "definitions.json").write_text(
            json.dumps(
                {
                    "regions": [
                        {"id": 0, "name": "f", "group": "m", "file": "", "line": 0, "kind": "java"}
                    ],
                    "locations": [],
                }
            )
        )
        with pytest.raises(ParseError, match="unknown region kind"):
            read_archive(tmp_path)
