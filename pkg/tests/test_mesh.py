import math
from fractions import Fraction

import numpy as np
import pytest

from spheregrid.errors import InvalidDistribution
from spheregrid.grid import grid_from_name
from spheregrid.mesh import (
    generate_mesh,
    mesh_stats,
    serial_topology,
    total_area,
)
from spheregrid.partition import Distribution, blocks_partition


def serial_mesh(name, include_pole=False, halo=0):
    g = grid_from_name(name)
    return generate_mesh(g, blocks_partition(g, 1), 0, halo=halo, include_pole=include_pole)


def strip_walk_oracle(n1, n2):
    """Independent count of quads/triangles in a periodic strip: walk the
    merged sorted longitudes with exact rational arithmetic."""
    quads = sum(
        1
        for i1 in range(1, n1 + 1)
        for i2 in range(1, n2 + 1)
        if Fraction(i1, n1) == Fraction(i2, n2)
    )
    return {"quads": quads, "triangles": n1 + n2 - 2 * quads, "total": n1 + n2 - quads}


class TestSerialMeshes:
    def test_f1_no_poles(self):
        m = serial_mesh("F1")
        assert m.nb_nodes == 8
        assert m.nb_elements == 4
        assert all(len(m.element_connectivity.row(e)) == 4 for e in range(4))

    def test_f1_with_poles(self):
        m = serial_mesh("F1", include_pole=True)
        assert m.nb_nodes == 10
        shapes = [len(m.element_connectivity.row(e)) for e in range(m.nb_elements)]
        assert shapes.count(4) == 4
        assert shapes.count(3) == 8

    def test_f1_stats(self):
        s = mesh_stats(serial_mesh("F1"))
        assert (s["V"], s["E"], s["F"], s["chi"]) == (8, 12, 4, 0)
        s = mesh_stats(serial_mesh("F1", include_pole=True))
        assert (s["V"], s["E"], s["F"], s["chi"]) == (10, 20, 12, 2)

    @pytest.mark.parametrize("name", ["F1", "F2", "F4", "F8", "O1", "O2", "O4", "O8"])
    def test_euler_characteristic(self, name):
        assert mesh_stats(serial_mesh(name))["chi"] == 0  # annulus
        assert mesh_stats(serial_mesh(name, include_pole=True))["chi"] == 2  # sphere

    @pytest.mark.parametrize("name", ["F1", "F2", "F4", "F8", "O2", "O8"])
    def test_area_covers_sphere(self, name):
        area = total_area(serial_mesh(name, include_pole=True))
        assert abs(area - 4 * math.pi) / (4 * math.pi) < 1e-6

    def test_octahedral_strip_structure(self):
        g = grid_from_name("O2")  # rows 20 24 24 20
        topo = serial_topology(g, include_pole=False)
        sizes = [len(e) for e in topo.elem_nodes]
        # strips in sweep order: 20/24, 24/24 (equator, all quads), 24/20
        o1 = strip_walk_oracle(20, 24)
        assert sizes[: o1["total"]].count(4) == o1["quads"]
        equator = sizes[o1["total"] : o1["total"] + 24]
        assert equator == [4] * 24
        o3 = strip_walk_oracle(24, 20)
        assert len(sizes) == o1["total"] + 24 + o3["total"]

    def test_winding_counter_clockwise(self):
        # positive triple products for every corner triple, seen from outside
        m = serial_mesh("O2", include_pole=True)
        xyz = m.node_xyz
        for e in range(m.nb_elements):
            row = m.element_connectivity.row(e)
            k = len(row)
            for a in range(k):
                v0, v1, v2 = xyz[row[a]], xyz[row[(a + 1) % k]], xyz[row[(a + 2) % k]]
                assert np.dot(np.cross(v0, v1), v2) > 0

    def test_no_repeated_nodes_in_element(self):
        m = serial_mesh("O4", include_pole=True)
        for e in range(m.nb_elements):
            row = m.element_connectivity.row(e)
            assert len(set(row.tolist())) == len(row)

    def test_invalid_distribution(self):
        g = grid_from_name("F2")
        bad = Distribution(nparts=1, part_of=np.zeros(7, dtype=np.int32))
        with pytest.raises(InvalidDistribution):
            generate_mesh(g, bad, 0)


class TestDistributedMeshes:
    @pytest.mark.parametrize("name,nparts", [("F8", 4), ("O8", 3), ("F4", 2)])
    def test_partition_sum(self, name, nparts):
        g = grid_from_name(name)
        dist = blocks_partition(g, nparts)
        owned = []
        for p in range(nparts):
            m = generate_mesh(g, dist, p, halo=1)
            owned.append(m.node_global[~m.node_ghost])
        all_owned = np.concatenate(owned)
        assert len(all_owned) == g.npts
        assert np.array_equal(np.sort(all_owned), np.arange(g.npts))

    def test_depth0_has_no_ghosts(self):
        g = grid_from_name("F8")
        dist = blocks_partition(g, 4)
        m = generate_mesh(g, dist, 1, halo=0)
        assert not m.node_ghost.any()
        assert np.all(m.elem_halo == 0)

    def test_single_part_any_depth_no_ghosts(self):
        g = grid_from_name("F4")
        m = generate_mesh(g, blocks_partition(g, 1), 0, halo=3)
        assert not m.node_ghost.any()

    def test_halo1_closes_elements_around_owned_nodes(self):
        # every element with at least one owned node is present at depth >= 1
        g = grid_from_name("F8")
        dist = blocks_partition(g, 4)
        topo = serial_topology(g, include_pole=False)
        for p in range(4):
            m = generate_mesh(g, dist, p, halo=1)
            local_serial = set(m.elem_serial_id.tolist())
            for e, nodes in enumerate(topo.elem_nodes):
                if np.any(dist.part_of[nodes] == p):
                    assert e in local_serial

    def test_ghost_metadata(self):
        g = grid_from_name("F8")
        dist = blocks_partition(g, 4)
        meshes = [generate_mesh(g, dist, p, halo=2) for p in range(4)]
        for m in meshes:
            ghosts = np.nonzero(m.node_ghost)[0]
            assert np.all(m.node_halo[ghosts] >= 1)
            assert np.all(m.node_halo[~m.node_ghost] == 0)
            for i in ghosts:
                owner = meshes[m.node_part[i]]
                j = int(m.node_remote[i])
                assert owner.node_global[j] == m.node_global[i]
                assert not owner.node_ghost[j]

    def test_ghost_ordering(self):
        g = grid_from_name("F8")
        dist = blocks_partition(g, 4)
        m = generate_mesh(g, dist, 2, halo=2)
        ghosts = np.nonzero(m.node_ghost)[0]
        keys = list(zip(m.node_halo[ghosts].tolist(), m.node_global[ghosts].tolist()))
        assert keys == sorted(keys)

    def test_elements_reference_local_nodes(self):
        g = grid_from_name("O4")
        dist = blocks_partition(g, 3)
        m = generate_mesh(g, dist, 1, halo=2, include_pole=True)
        assert m.element_connectivity.indices.max() < m.nb_nodes
        assert m.element_connectivity.offsets[-1] == len(m.element_connectivity.indices)

    def test_determinism(self):
        g = grid_from_name("O4")
        dist = blocks_partition(g, 3)
        a = generate_mesh(g, dist, 1, halo=2, include_pole=True)
        b = generate_mesh(g, dist, 1, halo=2, include_pole=True)
        assert np.array_equal(a.node_global, b.node_global)
        assert np.array_equal(a.element_connectivity.indices, b.element_connectivity.indices)
        assert np.array_equal(a.elem_halo, b.elem_halo)

    def test_deeper_halo_is_superset(self):
        g = grid_from_name("F8")
        dist = blocks_partition(g, 4)
        m1 = generate_mesh(g, dist, 0, halo=1)
        m2 = generate_mesh(g, dist, 0, halo=2)
        assert set(m1.elem_serial_id.tolist()) <= set(m2.elem_serial_id.tolist())
        assert m2.node_ghost.sum() > m1.node_ghost.sum()
