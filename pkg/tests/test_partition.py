import numpy as np
import pytest

from spheregrid.errors import TooManyParts
from spheregrid.grid import GridKind, GridSpec, build_grid, grid_from_name
from spheregrid.partition import (
    PointCloudIndex,
    blocks_partition,
    matching_partition,
    nearest_point,
)


def custom_grid(npts_per_row, lats):
    return build_grid(
        GridSpec(GridKind.CUSTOM, rows=tuple((lat, n) for lat, n in zip(lats, npts_per_row)))
    )


class TestBlocks:
    def test_single_part(self):
        g = grid_from_name("F2")
        d = blocks_partition(g, 1)
        assert np.all(d.part_of == 0)

    def test_f8_four_parts(self):
        d = blocks_partition(grid_from_name("F8"), 4)
        assert d.counts.tolist() == [128, 128, 128, 128]

    def test_uneven(self):
        g = custom_grid([5, 5], [10.0, -10.0])  # npts = 10
        d = blocks_partition(g, 3)
        assert d.counts.tolist() == [4, 3, 3]
        assert np.all(np.diff(d.part_of) >= 0)

    @pytest.mark.parametrize("nparts", [1, 2, 3, 5, 7])
    def test_balance_and_contiguity(self, nparts):
        g = grid_from_name("O2")
        d = blocks_partition(g, nparts)
        counts = d.counts
        assert counts.max() - counts.min() <= 1
        # contiguous in global index: part ids non-decreasing
        assert np.all(np.diff(d.part_of) >= 0)
        assert counts.sum() == g.npts

    def test_too_many_parts(self):
        with pytest.raises(TooManyParts):
            blocks_partition(grid_from_name("F1"), 9)


class TestNearest:
    def test_grid_point_is_its_own_nearest(self):
        g = grid_from_name("F2")
        index = PointCloudIndex(g)
        xyz = g.xyz()
        for k in (0, 7, g.npts - 1):
            i, d = nearest_point(index, xyz[k])
            assert i == k
            assert d < 1e-14

    def test_antipode_of_lone_point(self):
        g = custom_grid([1], [0.0])
        index = PointCloudIndex(g)
        i, d = nearest_point(index, [-1.0, 0.0, 0.0])
        assert i == 0
        assert d == pytest.approx(2.0)

    def test_matches_linear_scan(self):
        g = grid_from_name("O8")
        index = PointCloudIndex(g)
        xyz = g.xyz()
        rng = np.random.default_rng(42)
        q = rng.normal(size=(1000, 3))
        q /= np.linalg.norm(q, axis=1, keepdims=True)
        got, _ = index.query(q)
        for k in range(len(q)):
            d = np.linalg.norm(xyz - q[k], axis=1)
            best = np.flatnonzero(d <= d.min() * (1 + 1e-12))
            assert got[k] in best
            assert got[k] == best.min()


class TestMatching:
    def test_self_matching_is_identity(self):
        g = grid_from_name("F4")
        d = blocks_partition(g, 4)
        m = matching_partition(g, g, d)
        assert np.array_equal(m.part_of, d.part_of)

    def test_single_part_master(self):
        tgt = grid_from_name("F2")
        src = grid_from_name("O4")
        m = matching_partition(tgt, src, blocks_partition(src, 1))
        assert np.all(m.part_of == 0)

    def test_against_brute_force(self):
        tgt = grid_from_name("F8")
        src = grid_from_name("O32")
        d = blocks_partition(src, 4)
        m = matching_partition(tgt, src, d)
        src_xyz = src.xyz()
        for k, p in enumerate(tgt.xyz()):
            dist = np.linalg.norm(src_xyz - p, axis=1)
            assert m.part_of[k] == d.part_of[int(np.argmin(dist))]

    def test_empty_parts_allowed(self):
        tgt = custom_grid([1], [89.0])  # one point near the north pole
        src = grid_from_name("F2")
        d = blocks_partition(src, 4)
        m = matching_partition(tgt, src, d)
        assert m.nparts == 4
        assert m.counts.sum() == 1
        assert m.counts.tolist().count(0) == 3
