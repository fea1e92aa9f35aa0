"""Fields: named numeric arrays with a host buffer and an optional
simulated device mirror, guarded by an explicit synchronization state
machine.

States: HostOnly (no device buffer), Synced (bitwise-equal mirrors),
HostDirty (host newer), DeviceDirty (device newer).  Reading a stale
mirror is a hard error rather than silent garbage.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .errors import (
    AlreadyAllocated,
    DuplicateName,
    NoDevice,
    StaleDevice,
    StaleHost,
)


class Kind(enum.Enum):
    REAL64 = "real64"
    REAL32 = "real32"
    INT32 = "int32"
    INT64 = "int64"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(
            {"real64": np.float64, "real32": np.float32, "int32": np.int32, "int64": np.int64}[
                self.value
            ]
        )


class MemoryState(enum.Enum):
    HOST_ONLY = "host_only"
    SYNCED = "synced"
    HOST_DIRTY = "host_dirty"
    DEVICE_DIRTY = "device_dirty"


class Intent(enum.Enum):
    READ = "read"
    READ_WRITE = "read_write"


class _View:
    """Context manager wrapping a buffer; ReadWrite marks the owning
    mirror dirty on exit (commit), Read leaves the state alone."""

    def __init__(self, field: "Field", buffer: np.ndarray, intent: Intent, device: bool):
        self._field = field
        self._intent = intent
        self._device = device
        self.array = buffer if intent is Intent.READ_WRITE else buffer.view()
        if intent is Intent.READ:
            self.array.setflags(write=False)

    def __enter__(self) -> np.ndarray:
        return self.array

    def __exit__(self, exc_type, exc, tb):
        if self._intent is Intent.READ_WRITE:
            if exc_type is None:
                self._field._commit_write(device=self._device)
            self._field._view_open = False
        return False


@dataclass
class Field:
    name: str
    shape: Tuple[int, int]  # (npts, levels)
    kind: Kind
    host: np.ndarray = dc_field(repr=False, default=None)
    device: Optional[np.ndarray] = dc_field(repr=False, default=None)
    state: MemoryState = MemoryState.HOST_ONLY
    functionspace_tag: Optional[str] = None
    copy_counters: Dict[str, int] = dc_field(
        default_factory=lambda: {"host_to_device": 0, "device_to_host": 0}
    )
    _view_open: bool = dc_field(repr=False, default=False)

    @property
    def npts(self) -> int:
        return self.shape[0]

    @property
    def levels(self) -> int:
        return self.shape[1]

    def allocate_device(self):
        if self.state is not MemoryState.HOST_ONLY:
            raise AlreadyAllocated(f"field {self.name!r} already has a device buffer")
        self.device = self.host.copy()
        self.copy_counters["host_to_device"] += 1
        self.state = MemoryState.SYNCED
        return self

    def host_view(self, intent: Intent = Intent.READ) -> _View:
        if intent is Intent.READ:
            if self.state is MemoryState.DEVICE_DIRTY:
                raise StaleHost(f"host read of {self.name!r} while device is newer; update_host first")
        else:
            if self.state is MemoryState.DEVICE_DIRTY:
                raise StaleHost(f"host write of {self.name!r} while device is newer; update_host first")
            self._claim_exclusive()
        return _View(self, self.host, intent, device=False)

    def device_view(self, intent: Intent = Intent.READ) -> _View:
        if self.state is MemoryState.HOST_ONLY:
            raise NoDevice(f"field {self.name!r} has no device buffer")
        if self.state is MemoryState.HOST_DIRTY:
            raise StaleDevice(f"device access to {self.name!r} while host is newer; update_device first")
        if intent is Intent.READ_WRITE:
            self._claim_exclusive()
        return _View(self, self.device, intent, device=True)

    def update_host(self):
        if self.device is None:
            raise NoDevice(f"field {self.name!r} has no device buffer")
        if self.state is MemoryState.DEVICE_DIRTY:
            np.copyto(self.host, self.device)
            self.copy_counters["device_to_host"] += 1
            self.state = MemoryState.SYNCED

    def update_device(self):
        if self.device is None:
            raise NoDevice(f"field {self.name!r} has no device buffer")
        if self.state is MemoryState.HOST_DIRTY:
            np.copyto(self.device, self.host)
            self.copy_counters["host_to_device"] += 1
            self.state = MemoryState.SYNCED

    def _claim_exclusive(self):
        if self._view_open:
            raise RuntimeError(f"a ReadWrite view of {self.name!r} is already open")
        self._view_open = True

    def _commit_write(self, device: bool):
        if device:
            if self.state in (MemoryState.SYNCED, MemoryState.DEVICE_DIRTY):
                self.state = MemoryState.DEVICE_DIRTY
        else:
            if self.state in (MemoryState.SYNCED, MemoryState.HOST_DIRTY):
                self.state = MemoryState.HOST_DIRTY
            # HostOnly stays HostOnly


def create_field(name: str, shape: Tuple[int, int], kind: Kind = Kind.REAL64) -> Field:
    npts, levels = shape
    if npts < 0 or levels < 1:
        raise ValueError(f"bad field shape {shape}")
    host = np.zeros((npts, levels), dtype=kind.dtype)
    return Field(name=name, shape=(npts, levels), kind=kind, host=host)


class FieldSet:
    """Ordered collection of fields with unique names."""

    def __init__(self):
        self._fields: Dict[str, Field] = {}

    def add(self, field: Field) -> Field:
        if field.name in self._fields:
            raise DuplicateName(f"field {field.name!r} already in set")
        self._fields[field.name] = field
        return field

    def __getitem__(self, name: str) -> Field:
        return self._fields[name]

    def __contains__(self, name: str) -> bool:
        return name in self._fields

    def __iter__(self) -> Iterator[Field]:
        return iter(self._fields.values())

    def __len__(self) -> int:
        return len(self._fields)


def dump_field(field: Field, global_index: np.ndarray, stream):
    """Write the delimited-text dump: header plus one line per
    (point, level) with 17 significant digits for real64."""
    stream.write(f"# field: {field.name}\n")
    stream.write(f"# shape: {field.npts} {field.levels}\n")
    stream.write(f"# kind: {field.kind.value}\n")
    fmt = "%.17g" if field.kind is Kind.REAL64 else "%.9g"
    if field.kind in (Kind.INT32, Kind.INT64):
        fmt = "%d"
    with field.host_view(Intent.READ) as a:
        for p in range(field.npts):
            for lev in range(field.levels):
                stream.write(f"{int(global_index[p])} {lev} {fmt % a[p, lev]}\n")
