"""Domain decomposition: contiguous-blocks partitioner and the matching
partitioner that slaves one grid to another grid's decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import TooManyParts
from .grid import Grid

_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    nparts: int
    part_of: np.ndarray  # (npts,) int32 partition id per global index

    def __post_init__(self):
        self.part_of.setflags(write=False)

    @property
    def counts(self) -> np.ndarray:
        return np.bincount(self.part_of, minlength=self.nparts)

    def to_dict(self) -> dict:
        return {
            "nparts": self.nparts,
            "counts": self.counts.tolist(),
            "part_of": self.part_of.tolist(),
        }


def blocks_partition(grid: Grid, nparts: int) -> Distribution:
    """Split the canonical point order into nparts contiguous chunks; the
    first npts % nparts chunks get the extra point."""
    npts = grid.npts
    if nparts < 1:
        raise ValueError("nparts must be >= 1")
    if nparts > npts:
        raise TooManyParts(f"{nparts} parts for {npts} points")
    base, extra = divmod(npts, nparts)
    sizes = np.full(nparts, base, dtype=np.int64)
    sizes[:extra] += 1
    part_of = np.repeat(np.arange(nparts, dtype=np.int32), sizes)
    return Distribution(nparts=nparts, part_of=part_of)


class PointCloudIndex:
    """Exact nearest-neighbour index over a grid's points on the unit
    sphere.  Chord distance orders identically to great-circle distance;
    ties resolve to the smaller global index."""

    def __init__(self, grid: Grid):
        self.xyz = grid.xyz()
        self._tree = cKDTree(self.xyz)

    def query(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """points: (m, 3) -> (global indices (m,), chord distances (m,))."""
        points = np.atleast_2d(points)
        dist, idx = self._tree.query(points)
        # resolve near-equal distances deterministically
        for k in range(len(points)):
            ties = self._tree.query_ball_point(points[k], dist[k] * (1.0 + _TIE_RTOL) + 1e-300)
            if len(ties) > 1:
                d = np.linalg.norm(self.xyz[ties] - points[k], axis=1)
                best = d.min()
                cand = [t for t, dk in zip(ties, d) if dk <= best * (1.0 + _TIE_RTOL)]
                idx[k] = min(cand)
                dist[k] = np.linalg.norm(self.xyz[idx[k]] - points[k])
        return idx.astype(np.int64), dist


def nearest_point(index: PointCloudIndex, query_xyz) -> Tuple[int, float]:
    idx, dist = index.query(np.asarray(query_xyz, dtype=float).reshape(1, 3))
    return int(idx[0]), float(dist[0])


def matching_partition(target: Grid, master: Grid, master_dist: Distribution) -> Distribution:
    """Assign each target point the partition of its nearest master point."""
    index = PointCloudIndex(master)
    idx, _ = index.query(target.xyz())
    part_of = master_dist.part_of[idx].astype(np.int32)
    return Distribution(nparts=master_dist.nparts, part_of=part_of)
