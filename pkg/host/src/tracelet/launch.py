"""Two-phase launcher.

Phase one parses the tool arguments, publishes the measurement environment
(TRACELET_* variables plus the restart guard) and replaces the process image
with an identical interpreter invocation. Phase two, recognized through the
guard variable, initializes the core, installs the hook, and compiles and
executes the target script with argv rewritten so the target sees exactly
what a direct launch would give it.
"""

import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from tracelet_core import capi

from .instrumenter import DEFAULT_VARIANT, VARIANTS, install_hooks, uninstall_hooks

GUARD_ENV = "TRACELET_GUARD"
OUT_ENV = "TRACELET_OUT"
SUBSTRATES_ENV = "TRACELET_SUBSTRATES"
INSTRUMENTER_ENV = "TRACELET_INSTRUMENTER"

DEFAULT_SUBSTRATES = "trace,profile"
DEFAULT_OUTDIR = "tracelet-out"

USAGE = (
    "usage: python -m tracelet [--instrumenter=profile|trace]"
    " [--substrate=trace,profile|none] [--outdir=DIR] <script> [args...]"
)


class UsageError(Exception):
    pass


class TargetNotFoundError(Exception):
    pass


@dataclass
class LaunchSpec:
    """Tool arguments split from the target; everything after the target is opaque."""

    instrumenter: str = DEFAULT_VARIANT
    substrates: str = DEFAULT_SUBSTRATES
    outdir: str = DEFAULT_OUTDIR
    target: str = ""
    target_args: list = field(default_factory=list)


_VALUE_FLAGS = {
    "--instrumenter": "instrumenter",
    "--substrate": "substrates",
    "--outdir": "outdir",
}


def parse_argv(argv) -> LaunchSpec:
    """Consume tool flags up to the first non-flag argument, the target script."""
    spec = LaunchSpec()
    i = 0
    while i < len(argv):
        arg = argv[i]
        if not arg.startswith("-"):
            spec.target = arg
            spec.target_args = list(argv[i + 1:])
            break
        name, eq, value = arg.partition("=")
        if name not in _VALUE_FLAGS:
            raise UsageError(f"unknown option before target: {arg}")
        if not eq:
            i += 1
            if i >= len(argv):
                raise UsageError(f"{name} expects a value")
            value = argv[i]
        setattr(spec, _VALUE_FLAGS[name], value)
        i += 1
    if not spec.target:
        raise UsageError("no target script given")
    if spec.instrumenter not in VARIANTS:
        raise UsageError(f"--instrumenter must be one of {'|'.join(VARIANTS)}")
    return spec


def restart_command(argv) -> list:
    return [sys.executable, "-m", "tracelet", *argv]


def _restart(spec: LaunchSpec, argv) -> None:
    os.environ[GUARD_ENV] = "1"
    os.environ[OUT_ENV] = spec.outdir
    os.environ[SUBSTRATES_ENV] = spec.substrates
    os.environ[INSTRUMENTER_ENV] = spec.instrumenter
    command = restart_command(argv)
    os.execv(command[0], command)  # replaces this process; no return


def run_target(spec: LaunchSpec) -> int:
    """Phase two: measure the target script and finalize the core afterwards."""
    target = spec.target
    if not os.path.isfile(target):
        raise TargetNotFoundError(f"target script not found: {target}")
    source = Path(target).read_bytes()

    config = json.dumps(
        {
            "substrates": spec.substrates,
            "output_dir": spec.outdir,
            "instrumenter_label": spec.instrumenter,
        }
    )
    status = capi.tl_init(config)
    if status != 0:
        print(f"tracelet: core initialization failed (code {status})", file=sys.stderr)
        return 1

    hook_installed = False
    saved_argv = sys.argv
    script_dir = os.path.dirname(os.path.abspath(target))
    sys.path.insert(0, script_dir)
    sys.argv = [target, *spec.target_args]
    caught = None
    try:
        install_hooks(spec.instrumenter)
        hook_installed = True
        code = compile(source, target, "exec")
        target_globals = {
            "__name__": "__main__",
            "__file__": target,
            "__package__": None,
            "__spec__": None,
            "__builtins__": __builtins__,
        }
        exec(code, target_globals)
    except BaseException as exc:
        caught = exc
    finally:
        if hook_installed:
            uninstall_hooks()
        capi.tl_finalize()
        sys.argv = saved_argv
        try:
            sys.path.remove(script_dir)
        except ValueError:
            pass

    if caught is None:
        return 0
    if isinstance(caught, SystemExit):
        if caught.code is None:
            return 0
        if isinstance(caught.code, int):
            return caught.code
        print(caught.code, file=sys.stderr)
        return 1
    raise caught  # target's exception propagates, after finalize


def launch(argv) -> int:
    """Full launcher entry point; never returns from phase one."""
    try:
        spec = parse_argv(argv)
    except UsageError as exc:
        print(f"tracelet: {exc}", file=sys.stderr)
        print(USAGE, file=sys.stderr)
        return 2
    if os.environ.get(GUARD_ENV) != "1":
        _restart(spec, argv)
        raise AssertionError("unreachable: process image was replaced")
    try:
        return run_target(spec)
    except TargetNotFoundError as exc:
        print(f"tracelet: {exc}", file=sys.stderr)
        return 2
