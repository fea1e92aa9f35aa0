"""Gmsh ASCII export, format version 2.2.

Node ids are 1-based.  Coordinates are unit-sphere xyz by default, or
(lon, lat, 0) with ``coords="lonlat"``.  Elements carry two tags:
physical = partition id, elementary = halo level.
"""

from __future__ import annotations

from .mesh import Mesh

_GMSH_TRIANGLE = 2
_GMSH_QUAD = 3


def write_gmsh(mesh: Mesh, stream, coords: str = "xyz"):
    if coords not in ("xyz", "lonlat"):
        raise ValueError(f"coords must be 'xyz' or 'lonlat', got {coords!r}")
    stream.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
    stream.write("$Nodes\n")
    stream.write(f"{mesh.nb_nodes}\n")
    for i in range(mesh.nb_nodes):
        if coords == "xyz":
            x, y, z = mesh.node_xyz[i]
        else:
            x, y, z = mesh.node_lonlat[i, 0], mesh.node_lonlat[i, 1], 0.0
        stream.write(f"{i + 1} {x:.17g} {y:.17g} {z:.17g}\n")
    stream.write("$EndNodes\n")
    stream.write("$Elements\n")
    stream.write(f"{mesh.nb_elements}\n")
    for e in range(mesh.nb_elements):
        row = mesh.element_connectivity.row(e)
        etype = _GMSH_TRIANGLE if len(row) == 3 else _GMSH_QUAD
        tags = f"2 {mesh.partition_id} {int(mesh.elem_halo[e])}"
        nodes = " ".join(str(int(n) + 1) for n in row)
        stream.write(f"{e + 1} {etype} {tags} {nodes}\n")
    stream.write("$EndElements\n")


def save_gmsh(mesh: Mesh, path, coords: str = "xyz"):
    with open(path, "w", newline="\n") as f:
        write_gmsh(mesh, f, coords=coords)
