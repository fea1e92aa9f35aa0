"""Unstructured mesh generation from a structured grid.

For each pair of adjacent latitude rows the two rows are swept eastward
and merged into a periodic strip of quads (both rows advance together,
when the next longitudes coincide) and triangles (one row advances
alone).  Optional polar caps add one node per pole and a triangle fan to
the nearest row.  Per partition, the mesh holds the locally owned nodes
plus ghost nodes and halo elements to the requested depth.

Element halo levels:
  0: every node owned locally
  1: at least one node owned locally (present when halo depth >= 1)
  k >= 2: shares a node with an element of level < k

All node/element orderings are deterministic: owned nodes in grid order,
ghosts by (halo_level, global_index); elements in serial sweep order
within ascending halo level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidDistribution
from .geometry import lonlat_to_xyz_array
from .grid import Grid
from .partition import Distribution

TRIANGLE = 3
QUAD = 4


class Shape(enum.Enum):
    TRIANGLE = TRIANGLE
    QUAD = QUAD


@dataclass(frozen=True)
class Connectivity:
    offsets: np.ndarray  # (nelem + 1,)
    indices: np.ndarray  # flattened local node indices

    def row(self, e: int) -> np.ndarray:
        return self.indices[self.offsets[e] : self.offsets[e + 1]]

    def __len__(self) -> int:
        return len(self.offsets) - 1


@dataclass(frozen=True)
class Node:
    global_index: int
    lon: float
    lat: float
    partition: int
    remote_index: int
    ghost: bool
    halo_level: int


@dataclass(frozen=True)
class Element:
    shape: Shape
    nodes: Tuple[int, ...]
    halo_level: int


@dataclass
class Mesh:
    grid: Grid
    partition_id: int
    nparts: int
    halo_depth: int
    include_pole: bool
    # node arrays, local ordering
    node_global: np.ndarray  # int64
    node_lonlat: np.ndarray  # (n, 2)
    node_xyz: np.ndarray  # (n, 3)
    node_part: np.ndarray  # int32
    node_remote: np.ndarray  # int64, local index on the owning partition
    node_ghost: np.ndarray  # bool
    node_halo: np.ndarray  # int16, 0 = owned
    # element arrays
    element_connectivity: Connectivity
    elem_halo: np.ndarray  # int16
    elem_serial_id: np.ndarray  # int64, id in the serial sweep

    @property
    def nb_nodes(self) -> int:
        return len(self.node_global)

    @property
    def nb_owned_nodes(self) -> int:
        return int(np.count_nonzero(~self.node_ghost))

    @property
    def nb_elements(self) -> int:
        return len(self.element_connectivity)

    def node(self, i: int) -> Node:
        return Node(
            global_index=int(self.node_global[i]),
            lon=float(self.node_lonlat[i, 0]),
            lat=float(self.node_lonlat[i, 1]),
            partition=int(self.node_part[i]),
            remote_index=int(self.node_remote[i]),
            ghost=bool(self.node_ghost[i]),
            halo_level=int(self.node_halo[i]),
        )

    def element(self, e: int) -> Element:
        row = self.element_connectivity.row(e)
        return Element(
            shape=Shape.TRIANGLE if len(row) == 3 else Shape.QUAD,
            nodes=tuple(int(i) for i in row),
            halo_level=int(self.elem_halo[e]),
        )

    def elements_nodes(self) -> List[np.ndarray]:
        return [self.element_connectivity.row(e) for e in range(self.nb_elements)]


# -- serial topology ---------------------------------------------------------

_TOPO_CACHE: Dict[tuple, "_SerialTopology"] = {}


@dataclass
class _SerialTopology:
    nnodes: int  # grid.npts (+2 with poles)
    elem_nodes: List[np.ndarray]  # global node ids per element
    node_lonlat: np.ndarray
    north_pole: Optional[int]
    south_pole: Optional[int]


def _merge_strip(o1: int, n1: int, o2: int, n2: int) -> List[List[int]]:
    """Merge two adjacent rows (north: offset o1, n1 points; south: o2, n2)
    into a periodic strip.  Quad when the next longitudes coincide exactly,
    otherwise a triangle advancing the row with the smaller next longitude."""
    elems = []
    i1 = i2 = 0
    while i1 < n1 or i2 < n2:
        can_n = i1 < n1
        can_s = i2 < n2
        if can_n and can_s:
            # compare (i1+1)/n1 with (i2+1)/n2 exactly
            lhs = (i1 + 1) * n2
            rhs = (i2 + 1) * n1
            if lhs == rhs:
                elems.append(
                    [o2 + i2, o2 + (i2 + 1) % n2, o1 + (i1 + 1) % n1, o1 + i1]
                )
                i1 += 1
                i2 += 1
                continue
            advance_north = lhs < rhs
        else:
            advance_north = can_n
        if advance_north:
            elems.append([o2 + i2 % n2, o1 + (i1 + 1) % n1, o1 + i1])
            i1 += 1
        else:
            elems.append([o2 + i2, o2 + (i2 + 1) % n2, o1 + i1 % n1])
            i2 += 1
    return elems


def serial_topology(grid: Grid, include_pole: bool) -> _SerialTopology:
    key = (grid.name, grid.npts, tuple(grid.nlons.tolist()), include_pole)
    cached = _TOPO_CACHE.get(key)
    if cached is not None:
        return cached

    npts = grid.npts
    lonlat = grid.lonlats()
    north_pole = south_pole = None
    if include_pole:
        north_pole = npts
        south_pole = npts + 1
        lonlat = np.vstack([lonlat, [[0.0, 90.0], [0.0, -90.0]]])

    elems: List[List[int]] = []
    if include_pole:
        o0, n0 = int(grid.row_offset[0]), int(grid.nlons[0])
        for i in range(n0):
            elems.append([o0 + i, o0 + (i + 1) % n0, north_pole])
    for j in range(grid.nrows - 1):
        elems.extend(
            _merge_strip(
                int(grid.row_offset[j]),
                int(grid.nlons[j]),
                int(grid.row_offset[j + 1]),
                int(grid.nlons[j + 1]),
            )
        )
    if include_pole:
        oL, nL = int(grid.row_offset[grid.nrows - 1]), int(grid.nlons[grid.nrows - 1])
        for i in range(nL):
            elems.append([oL + (i + 1) % nL, oL + i, south_pole])

    topo = _SerialTopology(
        nnodes=npts + (2 if include_pole else 0),
        elem_nodes=[np.asarray(e, dtype=np.int64) for e in elems],
        node_lonlat=lonlat,
        north_pole=north_pole,
        south_pole=south_pole,
    )
    _TOPO_CACHE[key] = topo
    return topo


# -- per-partition mesh ------------------------------------------------------


def _owner_of(topo: _SerialTopology, dist: Distribution, npts: int) -> np.ndarray:
    owner = np.asarray(dist.part_of, dtype=np.int32)
    if topo.north_pole is not None:
        # poles are owned by the partitions holding the first/last grid point
        owner = np.concatenate([owner, [owner[0], owner[npts - 1]]]).astype(np.int32)
    return owner


def generate_mesh(
    grid: Grid,
    dist: Distribution,
    part: int = 0,
    halo: int = 0,
    include_pole: bool = False,
) -> Mesh:
    if len(dist.part_of) != grid.npts:
        raise InvalidDistribution(
            f"distribution sized {len(dist.part_of)} for a grid of {grid.npts} points"
        )
    if not 0 <= part < dist.nparts:
        raise ValueError(f"partition {part} not in [0, {dist.nparts})")

    topo = serial_topology(grid, include_pole)
    owner = _owner_of(topo, dist, grid.npts)
    owned_mask = owner == part

    # element halo levels
    nelem = len(topo.elem_nodes)
    level = np.full(nelem, -1, dtype=np.int16)
    for e, nodes in enumerate(topo.elem_nodes):
        c = int(np.count_nonzero(owned_mask[nodes]))
        if c == len(nodes):
            level[e] = 0
        elif c > 0 and halo >= 1:
            level[e] = 1
    present_nodes = set()
    for e in np.nonzero(level >= 0)[0]:
        present_nodes.update(topo.elem_nodes[e].tolist())
    node_level_intro: Dict[int, int] = {}
    for e in np.nonzero(level >= 0)[0]:
        lv = int(level[e])
        for g in topo.elem_nodes[e]:
            g = int(g)
            if not owned_mask[g]:
                node_level_intro[g] = min(node_level_intro.get(g, 99), max(lv, 1))
    for depth in range(2, halo + 1):
        added = []
        for e in np.nonzero(level < 0)[0]:
            if any(int(g) in present_nodes for g in topo.elem_nodes[e]):
                added.append(e)
        for e in added:
            level[e] = depth
        for e in added:
            for g in topo.elem_nodes[e]:
                g = int(g)
                present_nodes.add(g)
                if not owned_mask[g]:
                    node_level_intro[g] = min(node_level_intro.get(g, 99), depth)

    keep = np.nonzero(level >= 0)[0]
    # stable: ascending halo level, serial sweep order within a level
    keep = keep[np.argsort(level[keep], kind="stable")]

    # local node ordering: owned (grid order) then ghosts by (halo, gidx)
    owned_nodes = np.nonzero(owned_mask)[0].astype(np.int64)
    ghosts = sorted(node_level_intro.items(), key=lambda kv: (kv[1], kv[0]))
    ghost_nodes = np.asarray([g for g, _ in ghosts], dtype=np.int64)
    ghost_levels = np.asarray([lv for _, lv in ghosts], dtype=np.int16)

    node_global = np.concatenate([owned_nodes, ghost_nodes]) if len(ghost_nodes) else owned_nodes
    nloc = len(node_global)
    local_of = {int(g): i for i, g in enumerate(node_global)}

    node_part = owner[node_global].astype(np.int32)
    node_ghost = np.zeros(nloc, dtype=bool)
    node_ghost[len(owned_nodes) :] = True
    node_halo = np.zeros(nloc, dtype=np.int16)
    node_halo[len(owned_nodes) :] = ghost_levels

    # remote index: position of the global id within the owner's sorted
    # owned-node list (the owner's local ordering places owned nodes first,
    # sorted by global index)
    node_remote = np.empty(nloc, dtype=np.int64)
    node_remote[: len(owned_nodes)] = np.arange(len(owned_nodes))
    for i in range(len(owned_nodes), nloc):
        g = int(node_global[i])
        p = int(node_part[i])
        node_remote[i] = int(np.count_nonzero(owner[:g] == p))

    offsets = [0]
    indices: List[int] = []
    for e in keep:
        for g in topo.elem_nodes[e]:
            indices.append(local_of[int(g)])
        offsets.append(len(indices))
    connectivity = Connectivity(
        offsets=np.asarray(offsets, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int64),
    )

    lonlat = topo.node_lonlat[node_global]
    return Mesh(
        grid=grid,
        partition_id=part,
        nparts=dist.nparts,
        halo_depth=halo,
        include_pole=include_pole,
        node_global=node_global,
        node_lonlat=lonlat,
        node_xyz=lonlat_to_xyz_array(lonlat[:, 0], lonlat[:, 1]),
        node_part=node_part,
        node_remote=node_remote,
        node_ghost=node_ghost,
        node_halo=node_halo,
        element_connectivity=connectivity,
        elem_halo=level[keep],
        elem_serial_id=keep.astype(np.int64),
    )


# -- diagnostics -------------------------------------------------------------


def _edge_set(mesh: Mesh) -> set:
    edges = set()
    for e in range(mesh.nb_elements):
        row = mesh.element_connectivity.row(e)
        k = len(row)
        for a in range(k):
            i, j = int(row[a]), int(row[(a + 1) % k])
            edges.add((i, j) if i < j else (j, i))
    return edges


def mesh_stats(mesh: Mesh) -> dict:
    """V, E, F and the Euler characteristic, plus owned-entity counts.

    E counts unique undirected node pairs appearing as element sides, so
    the Euler characteristic is meaningful for serial meshes."""
    v = mesh.nb_nodes
    e = len(_edge_set(mesh))
    f = mesh.nb_elements
    owned_elems = 0
    for k in range(f):
        row = mesh.element_connectivity.row(k)
        if int(mesh.node_part[row].min()) == mesh.partition_id:
            owned_elems += 1
    return {
        "V": v,
        "E": e,
        "F": f,
        "chi": v - e + f,
        "owned_nodes": mesh.nb_owned_nodes,
        "owned_elements": owned_elems,
    }


def _triangle_area(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Spherical triangle area by L'Huilier's theorem."""

    def angle(u, v):
        return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))

    sa, sb, sc = angle(b, c), angle(c, a), angle(a, b)
    s = 0.5 * (sa + sb + sc)
    t = (
        math.tan(0.5 * s)
        * math.tan(0.5 * (s - sa))
        * math.tan(0.5 * (s - sb))
        * math.tan(0.5 * (s - sc))
    )
    return 4.0 * math.atan(math.sqrt(max(t, 0.0)))


def split_quad(row: np.ndarray) -> List[np.ndarray]:
    """Split a quad into two triangles by the diagonal anchored at the
    corner with the lowest local node index."""
    m = int(np.argmin(row))
    cyc = [int(row[(m + k) % 4]) for k in range(4)]
    return [
        np.asarray([cyc[0], cyc[1], cyc[2]], dtype=np.int64),
        np.asarray([cyc[0], cyc[2], cyc[3]], dtype=np.int64),
    ]


def element_triangles(mesh: Mesh, e: int) -> List[np.ndarray]:
    row = mesh.element_connectivity.row(e)
    if len(row) == 3:
        return [np.asarray(row, dtype=np.int64)]
    return split_quad(row)


def total_area(mesh: Mesh) -> float:
    """Sum of spherical element areas (quads split into triangles)."""
    area = 0.0
    xyz = mesh.node_xyz
    for e in range(mesh.nb_elements):
        for tri in element_triangles(mesh, e):
            area += _triangle_area(xyz[tri[0]], xyz[tri[1]], xyz[tri[2]])
    return area
