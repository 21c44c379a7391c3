"""Interpreter hooks that translate frame events into core enter/exit calls.

Two variants exist. The profile hook (default) receives call, return,
c_call, c_return and c_exception events, so it also covers native callees.
The trace hook receives call, return, line, exception and opcode events;
only call/return are forwarded, the rest are consumed, so both variants
emit the same region stream for interpreted code. Events raised by frames
of this package or the core binding layer are skipped entirely, and hook
failures never propagate into the target.
"""

import sys
import threading

from tracelet_core import capi

KIND_INTERPRETED = 0
KIND_NATIVE = 1

VARIANTS = ("profile", "trace")
DEFAULT_VARIANT = "profile"

_OWN_MODULES = ("tracelet", "tracelet_core")


class CoreUnavailableError(RuntimeError):
    """The measurement core rejected the hook's location handshake."""


def _own_frame(frame) -> bool:
    module = frame.f_globals.get("__name__")
    if not isinstance(module, str):
        return False
    for own in _OWN_MODULES:
        if module == own or module.startswith(own + "."):
            return True
    return False


class _Forwarder:
    """Region/location caching shared by both hook variants."""

    def __init__(self):
        self._code_regions = {}
        self._native_regions = {}
        self._tls = threading.local()
        self.dropped = 0
        # bound here so the per-event path skips module attribute lookups
        self._tl_enter = capi.tl_enter
        self._tl_exit = capi.tl_exit

    def _location(self):
        location = getattr(self._tls, "location", None)
        if location is None:
            location = capi.tl_location(threading.current_thread().name)
            if location < 0:
                return None
            self._tls.location = location
        return location

    def _frame_region(self, frame):
        code = frame.f_code
        region = self._code_regions.get(code)
        if region is None:
            group = frame.f_globals.get("__name__") or "<unknown>"
            region = capi.tl_region(
                code.co_name, group, code.co_filename, code.co_firstlineno, KIND_INTERPRETED
            )
            self._code_regions[code] = region
        return region

    def _native_region(self, callee):
        group = getattr(callee, "__module__", None) or "builtins"
        name = getattr(callee, "__qualname__", None) or getattr(callee, "__name__", None)
        if name is None:
            name = type(callee).__name__
        key = (group, name)
        region = self._native_regions.get(key)
        if region is None:
            region = capi.tl_region(name, group, "", 0, KIND_NATIVE)
            self._native_regions[key] = region
        return region

    def _drop(self):
        self.dropped += 1
        if self.dropped == 1:
            print("tracelet: dropped an instrumentation event (hook failure)", file=sys.stderr)


class ProfileHook(_Forwarder):
    """sys.setprofile callback: interpreted and native enter/exit pairs."""

    def __call__(self, frame, event, arg):
        if _own_frame(frame):
            return
        try:
            location = self._location()
            if location is None:
                return
            if event == "call":
                self._tl_enter(location, self._frame_region(frame))
            elif event == "return":
                # also fires with arg None while an exception unwinds
                self._tl_exit(location, self._frame_region(frame))
            elif event == "c_call":
                self._tl_enter(location, self._native_region(arg))
            elif event == "c_return" or event == "c_exception":
                self._tl_exit(location, self._native_region(arg))
        except Exception:
            self._drop()


class TraceHook(_Forwarder):
    """sys.settrace callback: call/return forwarded, line-level events consumed."""

    def __call__(self, frame, event, arg):
        # line / exception / opcode dominate; they are received but never
        # forwarded, so they short-circuit before any frame inspection.
        # Own frames cannot reach here with those events: their 'call'
        # returns None, which disables local tracing for the frame.
        if event != "call" and event != "return":
            return self
        if _own_frame(frame):
            return None
        try:
            location = self._location()
            if location is not None:
                if event == "call":
                    self._tl_enter(location, self._frame_region(frame))
                else:
                    self._tl_exit(location, self._frame_region(frame))
        except Exception:
            self._drop()
        return self  # keep per-frame tracing active


def install_hooks(variant: str = DEFAULT_VARIANT):
    """Install the chosen hook for this thread and all threads created later.

    Raises CoreUnavailableError when the core has no active measurement.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown instrumenter variant: {variant!r}")
    if capi.tl_location(threading.current_thread().name) < 0:
        raise CoreUnavailableError("measurement core is not initialized")
    if variant == "profile":
        hook = ProfileHook()
        threading.setprofile(hook)
        sys.setprofile(hook)
    else:
        hook = TraceHook()
        threading.settrace(hook)
        sys.settrace(hook)
    return hook


def uninstall_hooks() -> None:
    sys.setprofile(None)
    sys.settrace(None)
    threading.setprofile(None)
    threading.settrace(None)
