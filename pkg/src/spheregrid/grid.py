"""Structured global grids and the grid-name grammar.

A grid is an immutable, ordered list of lon/lat points arranged in
latitude rows, visited north to south (index j) and west to east within
a row (index i), starting at lon = 0.  Supported families:

- ``F<N>``: full Gaussian, 2N rows at Gaussian latitudes, 4N points per row.
- ``O<N>``: octahedral reduced Gaussian, 2N rows; counting rows
  j = 1..N from either pole toward the equator, a row holds 4j + 16 points.
- custom row lists.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import IndexOutOfRange, InvalidSpec, UnknownGridName
from .gaussian import gaussian_latitudes
from .geometry import PointLonLat, RotationSpec, lonlat_to_xyz_array, unrotate


class GridKind(enum.Enum):
    FULL_GAUSSIAN = "full_gaussian"
    OCTAHEDRAL_GAUSSIAN = "octahedral_gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GridSpec:
    kind: GridKind
    n: Optional[int] = None
    rows: Optional[Tuple[Tuple[float, int], ...]] = None
    projection: Optional[RotationSpec] = None

    def __post_init__(self):
        if self.kind is GridKind.CUSTOM:
            if not self.rows:
                raise InvalidSpec("custom grid needs at least one row")
            lats = [lat for lat, _ in self.rows]
            if any(a >= b for a, b in zip(lats[1:], lats[:-1])):
                raise InvalidSpec("custom rows must be ordered strictly north to south")
            if any(nlon < 1 for _, nlon in self.rows):
                raise InvalidSpec("every row needs nlon >= 1")
        else:
            if self.n is None or self.n < 1:
                raise InvalidSpec("Gaussian grids need a positive resolution N")


_NAME_RE = re.compile(r"^([FO])([1-9][0-9]*)$")


def parse_grid_name(name: str) -> GridSpec:
    """Parse ``F<N>`` / ``O<N>``; anything else raises UnknownGridName."""
    m = _NAME_RE.match(name) if isinstance(name, str) else None
    if m is None:
        raise UnknownGridName(name)
    kind = GridKind.FULL_GAUSSIAN if m.group(1) == "F" else GridKind.OCTAHEDRAL_GAUSSIAN
    return GridSpec(kind=kind, n=int(m.group(2)))


def render_grid_name(spec: GridSpec) -> str:
    if spec.kind is GridKind.FULL_GAUSSIAN:
        return f"F{spec.n}"
    if spec.kind is GridKind.OCTAHEDRAL_GAUSSIAN:
        return f"O{spec.n}"
    return f"custom[{len(spec.rows)} rows]"


def _row_counts(spec: GridSpec) -> np.ndarray:
    n = spec.n
    if spec.kind is GridKind.FULL_GAUSSIAN:
        return np.full(2 * n, 4 * n, dtype=np.int64)
    # octahedral: 4j + 16 points on row j = 1..N from each pole
    j = np.arange(1, n + 1, dtype=np.int64)
    north = 4 * j + 16
    return np.concatenate([north, north[::-1]])


@dataclass(frozen=True)
class Grid:
    """Materialized grid: rows of (latitude, nlon) plus derived indexing."""

    spec: GridSpec
    latitudes: np.ndarray  # (nrows,)
    nlons: np.ndarray  # (nrows,) int64
    name: str
    row_offset: np.ndarray = field(repr=False, default=None)  # (nrows+1,)

    def __post_init__(self):
        offset = np.concatenate([[0], np.cumsum(self.nlons)])
        object.__setattr__(self, "row_offset", offset)
        self.latitudes.setflags(write=False)
        self.nlons.setflags(write=False)
        offset.setflags(write=False)

    @property
    def npts(self) -> int:
        return int(self.row_offset[-1])

    @property
    def nrows(self) -> int:
        return len(self.latitudes)

    @property
    def rows(self) -> Sequence[Tuple[float, int]]:
        return list(zip(self.latitudes.tolist(), self.nlons.tolist()))

    def decode(self, g: int) -> Tuple[int, int]:
        """Global index -> (i, j) in canonical row-major order."""
        if not 0 <= g < self.npts:
            raise IndexOutOfRange(f"global index {g} out of range [0, {self.npts})")
        j = int(np.searchsorted(self.row_offset, g, side="right")) - 1
        return g - int(self.row_offset[j]), j

    def point(self, g: int) -> PointLonLat:
        i, j = self.decode(g)
        p = PointLonLat(360.0 * i / int(self.nlons[j]), float(self.latitudes[j]))
        if self.spec.projection is not None:
            p = unrotate(p, self.spec.projection)
        return p

    def lonlats(self) -> np.ndarray:
        """(npts, 2) lon/lat of every point in canonical order."""
        out = np.empty((self.npts, 2))
        for j in range(self.nrows):
            a, b = self.row_offset[j], self.row_offset[j + 1]
            nlon = int(self.nlons[j])
            out[a:b, 0] = 360.0 * np.arange(nlon) / nlon
            out[a:b, 1] = self.latitudes[j]
        if self.spec.projection is not None and not self.spec.projection.is_identity:
            rot = self.spec.projection.matrix()
            xyz = lonlat_to_xyz_array(out[:, 0], out[:, 1]) @ rot.T
            out[:, 1] = np.degrees(np.arctan2(xyz[:, 2], np.hypot(xyz[:, 0], xyz[:, 1])))
            out[:, 0] = np.degrees(np.arctan2(xyz[:, 1], xyz[:, 0])) % 360.0
        return out

    def xyz(self) -> np.ndarray:
        """(npts, 3) unit-sphere coordinates of every point."""
        ll = self.lonlats()
        return lonlat_to_xyz_array(ll[:, 0], ll[:, 1])

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.spec.kind.value,
            "n": self.spec.n,
            "npts": self.npts,
            "rows": [{"lat": lat, "nlon": nlon} for lat, nlon in self.rows],
        }


def build_grid(spec: GridSpec) -> Grid:
    if spec.kind is GridKind.CUSTOM:
        lats = np.array([lat for lat, _ in spec.rows], dtype=float)
        nlons = np.array([nlon for _, nlon in spec.rows], dtype=np.int64)
    else:
        lats = gaussian_latitudes(spec.n)
        nlons = _row_counts(spec)
    return Grid(spec=spec, latitudes=lats, nlons=nlons, name=render_grid_name(spec))


def grid_from_name(name: str) -> Grid:
    return build_grid(parse_grid_name(name))


def grid_point(grid: Grid, g: int) -> PointLonLat:
    return grid.point(g)
