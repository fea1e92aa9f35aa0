"""Function spaces: bind fields to a discretisation and implement the
parallel operations over it (halo exchange, gather/scatter, checksum).

``NodeColumns`` discretises fields on the local mesh nodes (owned +
ghost); ``StructuredColumns`` on the owned points of a distributed grid
(halo-free by design).  All collective operations must be called by
every rank of the context.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional

import numpy as np

from .errors import InconsistentMesh, PlanMismatch, StaleHost
from .field import Field, Kind, MemoryState, create_field
from .grid import Grid
from .mesh import Mesh
from .parallel import RankContext
from .partition import Distribution

_TAG_PLAN_REQUEST = 101
_TAG_EXCHANGE = 102
_TAG_GATHER = 103
_TAG_SCATTER = 104

# multiply-xor mixer constants (splitmix64 finalizer); also quoted in the
# README so external tools can reproduce digests
_MIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_LEVEL = np.uint64(0xC2B2AE3D27D4EB4F)
_MIX_M1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= _MIX_M1
    x ^= x >> np.uint64(27)
    x *= _MIX_M2
    x ^= x >> np.uint64(31)
    return x


@dataclass
class HaloExchangePlan:
    nnodes: int
    send: Dict[int, np.ndarray] = dc_field(default_factory=dict)  # peer -> owned local idx
    recv: Dict[int, np.ndarray] = dc_field(default_factory=dict)  # peer -> ghost local idx

    @property
    def peers(self):
        return sorted(set(self.send) | set(self.recv))


def build_exchange_plan(mesh: Mesh, ctx: Optional[RankContext]) -> HaloExchangePlan:
    """One round of request messages per peer: every rank tells each ghost
    owner which global indices it needs; the owner's send list mirrors the
    requested sequence."""
    plan = HaloExchangePlan(nnodes=mesh.nb_nodes)
    if ctx is None or ctx.nranks == 1:
        return plan

    ghost_idx = np.nonzero(mesh.node_ghost)[0]
    # ghosts grouped by owner, in local (halo_level, global_index) order
    wanted: Dict[int, np.ndarray] = {}
    for p in np.unique(mesh.node_part[ghost_idx]):
        sel = ghost_idx[mesh.node_part[ghost_idx] == p]
        wanted[int(p)] = sel
        plan.recv[int(p)] = sel

    owned_global = mesh.node_global[~mesh.node_ghost]
    local_of_owned = {int(g): i for i, g in enumerate(owned_global)}

    for peer in range(ctx.nranks):
        if peer == ctx.rank:
            continue
        gids = mesh.node_global[wanted[peer]] if peer in wanted else np.empty(0, np.int64)
        ctx.send(peer, _TAG_PLAN_REQUEST, np.asarray(gids, np.int64).tobytes())
    for peer in range(ctx.nranks):
        if peer == ctx.rank:
            continue
        req = np.frombuffer(ctx.receive(peer, _TAG_PLAN_REQUEST), dtype=np.int64)
        if len(req) == 0:
            continue
        try:
            plan.send[peer] = np.asarray([local_of_owned[int(g)] for g in req], np.int64)
        except KeyError as exc:
            raise InconsistentMesh(
                f"rank {ctx.rank} asked for global index {exc.args[0]} it does not own"
            ) from None
    return plan


def _require_host_writable(f: Field):
    if f.state is MemoryState.DEVICE_DIRTY:
        raise StaleHost(f"field {f.name!r} is device-dirty; update_host before exchanging")


def _mark_host_written(f: Field):
    if f.state is MemoryState.SYNCED:
        f.state = MemoryState.HOST_DIRTY


def halo_exchange(plan: HaloExchangePlan, f: Field, ctx: Optional[RankContext]):
    """Copy owner values into every ghost entry, all levels."""
    if f.npts != plan.nnodes:
        raise PlanMismatch(f"field has {f.npts} points, plan covers {plan.nnodes} nodes")
    _require_host_writable(f)
    if ctx is not None:
        for peer in sorted(plan.send):
            ctx.send(peer, _TAG_EXCHANGE, f.host[plan.send[peer]].tobytes())
        for peer in sorted(plan.recv):
            data = np.frombuffer(ctx.receive(peer, _TAG_EXCHANGE), dtype=f.host.dtype)
            f.host[plan.recv[peer]] = data.reshape(len(plan.recv[peer]), f.levels)
    _mark_host_written(f)


class NodeColumns:
    """Fields on the nodes (owned + ghost) of one partition's mesh."""

    def __init__(self, mesh: Mesh, ctx: Optional[RankContext] = None):
        self.mesh = mesh
        self.halo = mesh.halo_depth
        self.exchange_plan = build_exchange_plan(mesh, ctx)
        self._owned = ~mesh.node_ghost

    @property
    def nb_nodes(self) -> int:
        return self.mesh.nb_nodes

    @property
    def owned_global(self) -> np.ndarray:
        return self.mesh.node_global[self._owned]

    @property
    def global_size(self) -> int:
        return self.mesh.grid.npts + (2 if self.mesh.include_pole else 0)

    def owned_rows(self, f: Field) -> np.ndarray:
        return f.host[self._owned]

    def owned_row_index(self) -> np.ndarray:
        return np.nonzero(self._owned)[0]

    def create_field(self, name: str, levels: int = 1, kind: Kind = Kind.REAL64) -> Field:
        f = create_field(name, (self.mesh.nb_nodes, levels), kind)
        f.functionspace_tag = f"nodes:{self.mesh.grid.name}:p{self.mesh.partition_id}"
        return f

    def halo_exchange(self, f: Field, ctx: Optional[RankContext] = None):
        halo_exchange(self.exchange_plan, f, ctx)


class StructuredColumns:
    """Fields on the owned grid points of a distributed structured grid."""

    def __init__(self, grid: Grid, dist: Distribution, part: int = 0):
        self.grid = grid
        self.dist = dist
        self.part = part
        self.local_points = np.nonzero(dist.part_of == part)[0].astype(np.int64)

    @property
    def owned_global(self) -> np.ndarray:
        return self.local_points

    @property
    def global_size(self) -> int:
        return self.grid.npts

    def owned_rows(self, f: Field) -> np.ndarray:
        return f.host
    def owned_row_index(self) -> np.ndarray:
        return np.arange(len(self.local_points))

    def create_field(self, name: str, levels: int = 1, kind: Kind = Kind.REAL64) -> Field:
        f = create_field(name, (len(self.local_points), levels), kind)
        f.functionspace_tag = f"structured:{self.grid.name}:p{self.part}"
        return f


def gather_field(fs, f: Field, ctx: Optional[RankContext]) -> Optional[np.ndarray]:
    """Assemble owned values into a (global_size, levels) array on rank 0
    (canonical global-index order); other ranks return None."""
    owned = fs.owned_rows(f)
    gids = fs.owned_global
    if ctx is None or ctx.nranks == 1:
        out = np.zeros((fs.global_size, f.levels), dtype=f.host.dtype)
        out[gids] = owned
        return out
    payload = np.asarray(gids, np.int64).tobytes() + owned.tobytes()
    parts = ctx.gather_to_root(payload)
    if ctx.rank != 0:
        return None
    out = np.zeros((fs.global_size, f.levels), dtype=f.host.dtype)
    for blob in parts:
        n = len(blob) // (8 + f.host.dtype.itemsize * f.levels)
        g = np.frombuffer(blob[: 8 * n], dtype=np.int64)
        vals = np.frombuffer(blob[8 * n :], dtype=f.host.dtype).reshape(n, f.levels)
        out[g] = vals
    return out


def scatter_field(fs, f: Field, ctx: Optional[RankContext], global_values: Optional[np.ndarray]):
    """Distribute a rank-0 global array into each rank's owned entries."""
    rows = fs.owned_row_index()
    if ctx is None or ctx.nranks == 1:
        f.host[rows] = global_values[fs.owned_global]
        _mark_host_written(f)
        return
    if ctx.rank == 0:
        gid_parts = ctx.gather_to_root(np.asarray(fs.owned_global, np.int64).tobytes())
        for peer in range(1, ctx.nranks):
            g = np.frombuffer(gid_parts[peer], dtype=np.int64)
            ctx.send(peer, _TAG_SCATTER, np.ascontiguousarray(global_values[g]).tobytes())
        f.host[rows] = global_values[fs.owned_global]
    else:
        ctx.gather_to_root(np.asarray(fs.owned_global, np.int64).tobytes())
        data = np.frombuffer(ctx.receive(0, _TAG_SCATTER), dtype=f.host.dtype)
        f.host[rows] = data.reshape(len(rows), f.levels)
    _mark_host_written(f)


def _value_bits(a: np.ndarray) -> np.ndarray:
    if a.dtype.itemsize == 8:
        return a.view(np.uint64)
    return a.view(np.uint32).astype(np.uint64)


def checksum(fs, f: Field, ctx: Optional[RankContext]) -> int:
    """Order-independent 64-bit digest over owned values, identical for
    any partition count: wrapping sum of mix(global_index, level, bits)."""
    owned = np.ascontiguousarray(fs.owned_rows(f))
    gids = np.asarray(fs.owned_global, dtype=np.uint64)
    levels = np.arange(f.levels, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = gids[:, None] * _MIX_GAMMA + (levels[None, :] + np.uint64(1)) * _MIX_LEVEL
        h = _mix64(keys ^ _value_bits(owned))
        partial = np.uint64(np.sum(h, dtype=np.uint64))
    if ctx is None or ctx.nranks == 1:
        return int(partial)
    parts = ctx.gather_to_root(partial.tobytes())
    if ctx.rank == 0:
        total = np.uint64(0)
        with np.errstate(over="ignore"):
            for blob in parts:
                total += np.frombuffer(blob, dtype=np.uint64)[0]
        digest = total.tobytes()
    else:
        digest = None
    return int(np.frombuffer(ctx.broadcast_from_root(digest), dtype=np.uint64)[0])


def format_checksum(digest: int) -> str:
    return f"{digest:016x}"
