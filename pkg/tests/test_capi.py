import json

from tracelet_core import capi, core, read_archive
from tracelet_core.errors import (
    TL_ALREADY_INITIALIZED,
    TL_INVALID_ARGUMENT,
    TL_NOT_INITIALIZED,
    TL_SUCCESS,
    TL_UNKNOWN_LOCATION,
    TL_UNKNOWN_REGION,
)


def config_json(tmp_path, **extra):
    doc = {"substrates": ["trace", "profile"], "output_dir": str(tmp_path / "out")}
    doc.update(extra)
    return json.dumps(doc)


def test_full_session_through_foreign_interface(tmp_path):
    assert capi.tl_init(config_json(tmp_path, instrumenter_label="ffi")) == TL_SUCCESS
    loc = capi.tl_location("MainThread")
    assert loc == 0
    region = capi.tl_region("foo", "__main__", "run.py", 3, 0)
    assert region == 0
    assert capi.tl_region("foo", "__main__", "run.py", 3, 0) == region
    native = capi.tl_region("print", "builtins", "", 0, 1)
    assert native == 1
    assert capi.tl_enter(loc, region) == TL_SUCCESS
    assert capi.tl_enter(loc, native) == TL_SUCCESS
    assert capi.tl_exit(loc, native) == TL_SUCCESS
    assert capi.tl_exit(loc, region) == TL_SUCCESS
    assert capi.tl_finalize() == TL_SUCCESS
    archive = read_archive(tmp_path / "out")
    assert [r.kind.value for r in archive.regions] == ["interpreted", "native"]
    assert len(archive.events[0]) == 4


def test_calls_before_init_report_not_initialized():
    assert capi.tl_region("f", "m", "", 0, 0) == -TL_NOT_INITIALIZED
    assert capi.tl_location("t") == -TL_NOT_INITIALIZED
    assert capi.tl_enter(0, 0) == TL_NOT_INITIALIZED
    assert capi.tl_exit(0, 0) == TL_NOT_INITIALIZED
    assert capi.tl_finalize() == TL_NOT_INITIALIZED


def test_double_init_reports_already_initialized(tmp_path):
    assert capi.tl_init(config_json(tmp_path)) == TL_SUCCESS
    assert capi.tl_init(config_json(tmp_path)) == TL_ALREADY_INITIALIZED
    capi.tl_finalize()


def test_invalid_config_json(tmp_path):
    assert capi.tl_init("{not json") == TL_INVALID_ARGUMENT
    assert capi.tl_init('["list"]') == TL_INVALID_ARGUMENT
    assert capi.tl_init(json.dumps({"substrates": ["bogus"]})) == TL_INVALID_ARGUMENT
    assert core.current() is None


def test_nul_terminated_bytes_accepted(tmp_path):
    assert capi.tl_init(config_json(tmp_path).encode() + b"\0") == TL_SUCCESS
    region = capi.tl_region(b"foo\0trailing-garbage", b"__main__\0", b"run.py\0", 3, 0)
    assert region == 0
    loc = capi.tl_location(b"MainThread\0")
    assert capi.tl_enter(loc, region) == TL_SUCCESS
    assert capi.tl_exit(loc, region) == TL_SUCCESS
    assert capi.tl_finalize() == TL_SUCCESS
    archive = read_archive(tmp_path / "out")
    assert archive.regions[0].name == "foo"
    assert archive.locations[0].label == "MainThread"


def test_env_fallback_config(tmp_path, monkeypatch):
    monkeypatch.setenv(core.ENV_OUTPUT_DIR, str(tmp_path / "envout"))
    monkeypatch.setenv(core.ENV_SUBSTRATES, "none")
    monkeypatch.setenv(core.ENV_BUFFER_CAPACITY, "16")
    assert capi.tl_init("{}") == TL_SUCCESS
    measurement = core.current()
    assert measurement.config.substrates == frozenset({"none"})
    assert measurement.config.buffer_capacity == 16
    assert capi.tl_finalize() == TL_SUCCESS
    assert (tmp_path / "envout" / "metadata.json").exists()


def test_kind_accepts_strings_and_rejects_bad_codes(tmp_path):
    assert capi.tl_init(config_json(tmp_path)) == TL_SUCCESS
    assert capi.tl_region("a", "m", "", 0, "interpreted") == 0
    assert capi.tl_region("a", "m", "", 0, "native") == 1
    assert capi.tl_region("a", "m", "", 0, 2) == -TL_INVALID_ARGUMENT
    assert capi.tl_region("a", "m", "", 0, "weird") == -TL_INVALID_ARGUMENT
    capi.tl_finalize()


def test_unknown_ids_map_to_error_codes(tmp_path):
    assert capi.tl_init(config_json(tmp_path)) == TL_SUCCESS
    loc = capi.tl_location("MainThread")
    region = capi.tl_region("f", "m", "", 0, 0)
    assert capi.tl_enter(loc, 42) == TL_UNKNOWN_REGION
    assert capi.tl_enter(7, region) == TL_UNKNOWN_LOCATION
    assert capi.tl_exit(loc, 42) == TL_UNKNOWN_REGION
    capi.tl_finalize()
