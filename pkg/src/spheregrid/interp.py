"""Linear element-based remapping on the unit sphere.

Each target point is located inside a source mesh triangle (quads are
split by the diagonal anchored at the lowest local node index) and given
gnomonic barycentric weights: solve w1*a + w2*b + w3*c = lambda*p with
sum(w) = 1, i.e. central projection of p onto the triangle's plane.
This reproduces constants and Cartesian-linear fields exactly.

With the target grid matching-partitioned against the source grid and a
source halo depth >= 2, building and applying the operator needs zero
inter-rank communication.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateTriangle, NotLocated, ShapeMismatch
from .field import Field
from .functionspace import NodeColumns
from .grid import Grid
from .mesh import Mesh, element_triangles
from .partition import Distribution

CONTAIN_EPS = 1e-12
_KNN_FIRST = 8
_KNN_WIDE = 32


@dataclass(frozen=True)
class SphericalTriangle:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        vol = float(np.dot(np.cross(self.a, self.b), self.c))
        if abs(vol) <= 1e-15:
            raise DegenerateTriangle(f"triple product {vol}")


def signed_tests(tri: SphericalTriangle, p: np.ndarray) -> Tuple[float, float, float]:
    return (
        float(np.dot(np.cross(tri.a, tri.b), p)),
        float(np.dot(np.cross(tri.b, tri.c), p)),
        float(np.dot(np.cross(tri.c, tri.a), p)),
    )


def contains(tri: SphericalTriangle, p: np.ndarray, eps: float = CONTAIN_EPS) -> bool:
    """p lies in the spherical triangle iff all three edge-plane tests are
    >= -eps; boundary points count as inside."""
    t1, t2, t3 = signed_tests(tri, p)
    return t1 >= -eps and t2 >= -eps and t3 >= -eps


def barycentric_weights(tri: SphericalTriangle, p: np.ndarray) -> np.ndarray:
    """Gnomonic weights: solve [a b c] w = p then renormalize to sum 1."""
    m = np.column_stack([tri.a, tri.b, tri.c])
    try:
        w = np.linalg.solve(m, p)
    except np.linalg.LinAlgError:
        raise DegenerateTriangle("singular vertex matrix") from None
    s = w.sum()
    if s == 0.0:
        raise DegenerateTriangle("projection plane through the origin")
    return w / s


class MeshLocator:
    """Locates points in a mesh: candidate elements are those incident to
    the nearest mesh nodes; among containing triangles, the one with the
    largest minimum signed test value wins."""

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        self._tree = cKDTree(mesh.node_xyz)
        self._incidence: List[List[int]] = [[] for _ in range(mesh.nb_nodes)]
        for e in range(mesh.nb_elements):
            for n in mesh.element_connectivity.row(e):
                self._incidence[int(n)].append(e)
        self._tris: List[List[np.ndarray]] = [
            element_triangles(mesh, e) for e in range(mesh.nb_elements)
        ]

    def _candidates(self, p: np.ndarray, k: int) -> List[int]:
        k = min(k, self.mesh.nb_nodes)
        _, nn = self._tree.query(p, k=k)
        nn = np.atleast_1d(nn)
        seen, out = set(), []
        for n in nn:
            for e in self._incidence[int(n)]:
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        return out

    def locate(self, p: np.ndarray) -> Tuple[int, SphericalTriangle, np.ndarray]:
        """-> (element id, triangle, local corner node indices)."""
        p = np.asarray(p, dtype=float)
        xyz = self.mesh.node_xyz
        for k in (_KNN_FIRST, _KNN_WIDE):
            best = None
            for e in self._candidates(p, k):
                for corners in self._tris[e]:
                    tri = SphericalTriangle(xyz[corners[0]], xyz[corners[1]], xyz[corners[2]])
                    tests = signed_tests(tri, p)
                    score = min(tests)
                    if score >= -CONTAIN_EPS and (best is None or score > best[0]):
                        best = (score, e, tri, corners)
            if best is not None:
                return best[1], best[2], best[3]
        raise NotLocated("point not contained in any candidate element")


@dataclass
class InterpolationWeights:
    """Per owned target point: up to 3 source local node indices and their
    barycentric weights; fallback rows carry one weight of 1."""

    target_global: np.ndarray  # (m,) int64
    nodes: np.ndarray  # (m, 3) int64 source local node indices
    weights: np.ndarray  # (m, 3) float
    fallback: np.ndarray  # (m,) bool
    source_nnodes: int = 0
    source_global: Optional[np.ndarray] = dc_field(repr=False, default=None)
    # per-row gnomonic projection scale: sum(w_i * v_i) = scale * p, so the
    # operator evaluates linear fields exactly at the projected point scale*p
    scale: Optional[np.ndarray] = dc_field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.target_global)

    def export_rows(self) -> List[dict]:
        rows = []
        for k in range(len(self)):
            rows.append(
                {
                    "target_global_index": int(self.target_global[k]),
                    "source_global_indices": [
                        int(self.source_global[n]) for n in self.nodes[k]
                    ],
                    "weights": [float(w) for w in self.weights[k]],
                    "fallback": bool(self.fallback[k]),
                }
            )
        return rows


def build_remap(
    source_fs: NodeColumns,
    target: Grid,
    target_dist: Distribution,
    ctx=None,
    allow_fallback: bool = False,
) -> InterpolationWeights:
    """Weights remapping source mesh-node fields onto the locally owned
    points of the target grid.  Zero communication: every owned target
    point must fall inside a local (owned + halo) source element."""
    mesh = source_fs.mesh
    part = mesh.partition_id
    owned_targets = np.nonzero(target_dist.part_of == part)[0].astype(np.int64)
    target_xyz = target.xyz()

    locator = MeshLocator(mesh)
    m = len(owned_targets)
    nodes = np.zeros((m, 3), dtype=np.int64)
    weights = np.zeros((m, 3))
    fallback = np.zeros(m, dtype=bool)
    scale = np.ones(m)
    for k, t in enumerate(owned_targets):
        p = target_xyz[t]
        try:
            _, tri, corners = locator.locate(p)
        except NotLocated:
            if not allow_fallback:
                raise NotLocated(
                    f"target point {int(t)} not located in local source elements; "
                    "increase the source mesh halo depth",
                    target_global_index=int(t),
                ) from None
            _, nn = locator._tree.query(p)
            nodes[k] = [int(nn), int(nn), int(nn)]
            weights[k] = [1.0, 0.0, 0.0]
            fallback[k] = True
            continue
        nodes[k] = corners
        w = barycentric_weights(SphericalTriangle(tri.a, tri.b, tri.c), p)
        weights[k] = w
        scale[k] = float(w @ np.column_stack([tri.a, tri.b, tri.c]).T @ p)
    return InterpolationWeights(
        target_global=owned_targets,
        nodes=nodes,
        weights=weights,
        fallback=fallback,
        source_nnodes=mesh.nb_nodes,
        source_global=mesh.node_global,
        scale=scale,
    )


def apply_remap(weights: InterpolationWeights, source_field: Field, target_field: Field):
    """target[t] = sum_i w_i * source[node_i], per level.  Pure per-rank map."""
    if source_field.npts != weights.source_nnodes:
        raise ShapeMismatch(
            f"source field has {source_field.npts} points, weights expect {weights.source_nnodes}"
        )
    if target_field.npts != len(weights):
        raise ShapeMismatch(
            f"target field has {target_field.npts} points, weights cover {len(weights)}"
        )
    if source_field.levels != target_field.levels:
        raise ShapeMismatch("level counts differ")
    src = source_field.host
    out = (
        weights.weights[:, 0:1] * src[weights.nodes[:, 0]]
        + weights.weights[:, 1:2] * src[weights.nodes[:, 1]]
        + weights.weights[:, 2:3] * src[weights.nodes[:, 2]]
    )
    target_field.host[:] = out
    if target_field.state.value == "synced":
        from .field import MemoryState

        target_field.state = MemoryState.HOST_DIRTY


def export_weights(weights: InterpolationWeights, stream):
    import json

    for row in weights.export_rows():
        stream.write(json.dumps(row) + "\n")
