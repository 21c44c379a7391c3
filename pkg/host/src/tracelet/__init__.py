"""Run a Python script under region instrumentation:

    python -m tracelet [--instrumenter=profile|trace] \
                       [--substrate=trace,profile|none] \
                       [--outdir=DIR] script.py [script args...]

The launcher restarts the interpreter once to pin the measurement
environment, installs the chosen interpreter hook, executes the script with
its own argv, and finalizes the measurement core when the script ends.
"""

from .launch import LaunchSpec, TargetNotFoundError, UsageError, launch, parse_argv

__version__ = "0.1.0"

__all__ = ["LaunchSpec", "TargetNotFoundError", "UsageError", "launch", "parse_argv"]
