"""Library runtime: initialise/finalise and the four log channels.

The debug channel is controlled by the environment variable
``SPHEREGRID_DEBUG`` (1 enables, 0 or unset disables), read once at
initialise time.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from typing import Dict, Optional, TextIO

from .errors import DoubleInitialise

VERSION = "0.1.0"
BUILD_ID = "4c1f9ae"
DEBUG_ENV_VAR = "SPHEREGRID_DEBUG"

FEATURES = {
    "BoundsChecking": True,
    "RankSimulator": True,
    "DeviceMirror": True,
    "Tessellation": True,
}


@dataclass
class RuntimeConfig:
    debug: bool
    version: str = VERSION
    build_id: str = BUILD_ID
    features: Dict[str, bool] = field(default_factory=lambda: dict(FEATURES))


class LogChannel:
    def __init__(self, name: str, enabled: bool, sink: TextIO):
        self.name = name
        self.enabled = enabled
        self.sink = sink

    def __call__(self, message: str):
        if self.enabled:
            self.sink.write(f"{self.name}: {message}\n")


class Log:
    """Four channels; warning/error go to the error stream."""

    def __init__(self, debug_enabled: bool, out: TextIO = None, err: TextIO = None):
        out = out or sys.stdout
        err = err or sys.stderr
        self.debug = LogChannel("debug", debug_enabled, out)
        self.info = LogChannel("info", True, out)
        self.warning = LogChannel("warning", True, err)
        self.error = LogChannel("error", True, err)

    def flush(self):
        for ch in (self.debug, self.info, self.warning, self.error):
            ch.sink.flush()


_active: Optional["Library"] = None


class Library:
    def __init__(self, config: RuntimeConfig, log: Log):
        self.config = config
        self.log = log


def initialise(args=None, out: TextIO = None, err: TextIO = None) -> Library:
    global _active
    if _active is not None:
        raise DoubleInitialise("initialise called twice without finalise")
    debug = os.environ.get(DEBUG_ENV_VAR, "0") == "1"
    config = RuntimeConfig(debug=debug)
    log = Log(debug_enabled=debug, out=out, err=err)
    if debug:
        log.debug(f"version {config.version}")
        log.debug(f"build {config.build_id}")
        log.debug(f"executable {sys.argv[0]}")
    _active = Library(config, log)
    return _active


def finalise():
    global _active
    if _active is not None:
        _active.log.flush()
    _active = None
