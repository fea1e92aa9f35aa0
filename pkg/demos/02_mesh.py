"""Tessellate a grid into a mesh and check its global topology.

Rows are stitched into strips of quads and triangles; with the optional
pole points the mesh closes into a sphere (Euler characteristic 2) and
its spherical element areas sum to the full 4*pi steradians.
"""

import math

from spheregrid import blocks_partition, generate_mesh, grid_from_name
from spheregrid.gmsh import save_gmsh
from spheregrid.mesh import mesh_stats, total_area

grid = grid_from_name("O8")
dist = blocks_partition(grid, 1)

for include_pole in (False, True):
    mesh = generate_mesh(grid, dist, 0, include_pole=include_pole)
    s = mesh_stats(mesh)
    area = total_area(mesh)
    print(f"pole={include_pole}:  V={s['V']} E={s['E']} F={s['F']} "
          f"chi={s['chi']}  area/4pi={area / (4 * math.pi):.9f}")

# write a Gmsh file for visualisation
mesh = generate_mesh(grid, dist, 0, include_pole=True)
save_gmsh(mesh, "o8.msh")
print("wrote o8.msh")

# a distributed mesh carries ghost nodes around each partition
dist = blocks_partition(grid, 4)
for part in range(4):
    mesh = generate_mesh(grid, dist, part, halo=1)
    print(f"partition {part}: {mesh.nb_owned_nodes} owned nodes "
          f"+ {mesh.nb_nodes - mesh.nb_owned_nodes} ghosts")
