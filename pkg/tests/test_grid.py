import numpy as np
import pytest

from spheregrid.errors import IndexOutOfRange, InvalidSpec, UnknownGridName
from spheregrid.geometry import RotationSpec, great_circle_distance
from spheregrid.grid import (
    GridKind,
    GridSpec,
    build_grid,
    grid_from_name,
    parse_grid_name,
    render_grid_name,
)


def summed_npts(name):
    """Independent oracle: explicit per-row summation of the row laws."""
    kind, n = name[0], int(name[1:])
    if kind == "F":
        return sum(4 * n for _ in range(2 * n))
    return 2 * sum(4 * j + 16 for j in range(1, n + 1))


class TestNameParser:
    def test_paper_examples(self):
        assert parse_grid_name("O32") == GridSpec(GridKind.OCTAHEDRAL_GAUSSIAN, 32)
        assert parse_grid_name("F8") == GridSpec(GridKind.FULL_GAUSSIAN, 8)

    @pytest.mark.parametrize("bad", ["", "F0", "Q12", "F", "O", "F8x", "f8", "O08", "F-1", "8"])
    def test_rejects(self, bad):
        with pytest.raises(UnknownGridName) as ei:
            parse_grid_name(bad)
        assert repr(bad) in str(ei.value)

    @pytest.mark.parametrize("prefix", ["F", "O"])
    @pytest.mark.parametrize("n", [1, 2, 3, 17, 512, 4096])
    def test_round_trip(self, prefix, n):
        name = f"{prefix}{n}"
        assert render_grid_name(parse_grid_name(name)) == name


class TestBuildGrid:
    def test_f8_npts(self):
        g = grid_from_name("F8")
        assert g.npts == 512 == summed_npts("F8")

    def test_o32_npts(self):
        g = grid_from_name("O32")
        assert g.npts == 5248 == summed_npts("O32")

    def test_o1_rows(self):
        g = grid_from_name("O1")
        assert [nlon for _, nlon in g.rows] == [20, 20]
        assert g.npts == 40

    @pytest.mark.parametrize("n", range(1, 65))
    def test_closed_forms(self, n):
        assert grid_from_name(f"F{n}").npts == 8 * n * n == summed_npts(f"F{n}")
        assert grid_from_name(f"O{n}").npts == 4 * n * n + 36 * n == summed_npts(f"O{n}")

    def test_custom_rows_validated(self):
        with pytest.raises(InvalidSpec):
            GridSpec(GridKind.CUSTOM, rows=((0.0, 4), (10.0, 4)))  # south to north
        with pytest.raises(InvalidSpec):
            GridSpec(GridKind.CUSTOM, rows=((10.0, 4), (0.0, 0)))

    def test_custom_grid(self):
        g = build_grid(GridSpec(GridKind.CUSTOM, rows=((45.0, 8), (-45.0, 8))))
        assert g.npts == 16


class TestPointIteration:
    def test_first_point_f1(self):
        g = grid_from_name("F1")
        p = g.point(0)
        assert p.lon == 0.0
        assert p.lat == pytest.approx(35.26438968, abs=1e-7)

    def test_decode_g5_f1(self):
        g = grid_from_name("F1")
        assert g.decode(5) == (1, 1)
        p = g.point(5)
        assert p.lon == pytest.approx(90.0)
        assert p.lat == pytest.approx(-35.26438968, abs=1e-7)

    def test_out_of_range(self):
        g = grid_from_name("F1")
        with pytest.raises(IndexOutOfRange):
            g.point(g.npts)

    @pytest.mark.parametrize("name", ["F2", "O2"])
    def test_canonical_order(self, name):
        g = grid_from_name(name)
        prev_lat = 91.0
        for j in range(g.nrows):
            a, b = int(g.row_offset[j]), int(g.row_offset[j + 1])
            lats = {g.point(k).lat for k in range(a, b)}
            assert len(lats) == 1
            lat = lats.pop()
            assert lat < prev_lat
            prev_lat = lat
            lons = [g.point(k).lon for k in range(a, b)]
            assert lons[0] == 0.0
            assert all(x < y for x, y in zip(lons, lons[1:]))

    def test_lonlats_matches_point(self):
        g = grid_from_name("O2")
        ll = g.lonlats()
        for k in range(g.npts):
            p = g.point(k)
            assert ll[k, 0] == pytest.approx(p.lon)
            assert ll[k, 1] == pytest.approx(p.lat)


def test_rotated_grid_points():
    r = RotationSpec(10.0, 45.0)
    plain = build_grid(parse_grid_name("F2"))
    rotated = build_grid(GridSpec(GridKind.FULL_GAUSSIAN, 2, projection=r))
    # rotation is an isometry, so pairwise layout is preserved
    d_plain = great_circle_distance(plain.point(0), plain.point(5))
    d_rot = great_circle_distance(rotated.point(0), rotated.point(5))
    assert d_rot == pytest.approx(d_plain, abs=1e-10)
    # and points actually move
    assert rotated.point(0) != plain.point(0)
    xyz = rotated.xyz()
    assert np.allclose(np.linalg.norm(xyz, axis=1), 1.0)


def test_describe_document():
    doc = grid_from_name("F2").describe()
    assert doc["name"] == "F2"
    assert doc["npts"] == 32
    assert len(doc["rows"]) == 4
    assert set(doc["rows"][0]) == {"lat", "nlon"}
