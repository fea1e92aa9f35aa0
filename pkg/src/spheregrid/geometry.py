"""Points on the sphere, Cartesian embedding, and rotated lon-lat projections.

Longitudes are degrees east in [0, 360), latitudes degrees north in
[-90, 90].  Cartesian points live on the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotOnUnitSphere

UNIT_SPHERE_TOL = 1e-9


def normalize_lon(lon: float) -> float:
    """Fold a longitude into [0, 360)."""
    lon = math.fmod(lon, 360.0)
    if lon < 0.0:
        lon += 360.0
    if lon >= 360.0:  # fmod can return 360 - eps rounding up
        lon = 0.0
    return lon


@dataclass(frozen=True)
class PointLonLat:
    lon: float
    lat: float

    def __post_init__(self):
        object.__setattr__(self, "lon", normalize_lon(float(self.lon)))
        lat = float(self.lat)
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude out of range: {lat}")
        object.__setattr__(self, "lat", lat)


@dataclass(frozen=True)
class PointXYZ:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > UNIT_SPHERE_TOL:
            raise NotOnUnitSphere(f"|({self.x}, {self.y}, {self.z})| = {norm}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def lonlat_to_xyz(p: PointLonLat) -> PointXYZ:
    lam = math.radians(p.lon)
    phi = math.radians(p.lat)
    return PointXYZ(
        math.cos(phi) * math.cos(lam),
        math.cos(phi) * math.sin(lam),
        math.sin(phi),
    )


def xyz_to_lonlat(v: PointXYZ) -> PointLonLat:
    """Inverse embedding.  At the poles longitude is 0 by convention."""
    # atan2(z, r) is well conditioned near the poles, unlike asin(z)
    lat = math.degrees(math.atan2(v.z, math.hypot(v.x, v.y)))
    if abs(lat) >= 90.0 or (v.x == 0.0 and v.y == 0.0):
        return PointLonLat(0.0, lat)
    lon = math.degrees(math.atan2(v.y, v.x))
    return PointLonLat(lon, lat)


def lonlat_to_xyz_array(lon: np.ndarray, lat: np.ndarray) -> np.ndarray:
    """Vectorized embedding: (n,) lon/lat degrees -> (n, 3) unit vectors."""
    lam = np.radians(lon)
    phi = np.radians(lat)
    out = np.empty(lam.shape + (3,))
    out[..., 0] = np.cos(phi) * np.cos(lam)
    out[..., 1] = np.cos(phi) * np.sin(lam)
    out[..., 2] = np.sin(phi)
    return out


def great_circle_distance(a: PointLonLat, b: PointLonLat) -> float:
    """Central angle between two points, in radians."""
    va = lonlat_to_xyz(a)
    vb = lonlat_to_xyz(b)
    dot = va.x * vb.x + va.y * vb.y + va.z * vb.z
    cross = np.linalg.norm(np.cross(va.as_array(), vb.as_array()))
    return math.atan2(cross, dot)


@dataclass(frozen=True)
class RotationSpec:
    """Rotated lon-lat projection described by the true-coordinate position
    of the grid's north pole.  (0, 90) is the identity rotation."""

    north_pole_lon: float = 0.0
    north_pole_lat: float = 90.0

    @property
    def is_identity(self) -> bool:
        return self.north_pole_lat == 90.0 and normalize_lon(self.north_pole_lon) == 0.0

    def matrix(self) -> np.ndarray:
        """Rotation taking grid-frame Cartesian coordinates to true ones
        (grid north pole (0,0,1) -> the specified pole location)."""
        lam = math.radians(self.north_pole_lon)
        theta = math.radians(90.0 - self.north_pole_lat)
        ry = np.array(
            [
                [math.cos(theta), 0.0, math.sin(theta)],
                [0.0, 1.0, 0.0],
                [-math.sin(theta), 0.0, math.cos(theta)],
            ]
        )
        rz = np.array(
            [
                [math.cos(lam), -math.sin(lam), 0.0],
                [math.sin(lam), math.cos(lam), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        return rz @ ry


def rotate(p: PointLonLat, r: RotationSpec) -> PointLonLat:
    """Map true coordinates into the rotated frame: the point at the
    rotation's pole location comes out at latitude 90."""
    if r.is_identity:
        return p
    v = lonlat_to_xyz(p).as_array()
    w = r.matrix().T @ v
    w /= np.linalg.norm(w)
    return xyz_to_lonlat(PointXYZ(*w))


def unrotate(p: PointLonLat, r: RotationSpec) -> PointLonLat:
    """Map rotated-frame coordinates back to true coordinates."""
    if r.is_identity:
        return p
    v = lonlat_to_xyz(p).as_array()
    w = r.matrix() @ v
    w /= np.linalg.norm(w)
    return xyz_to_lonlat(PointXYZ(*w))
