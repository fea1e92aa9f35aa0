"""Build reduced Gaussian grids and inspect their structure.

A full grid F<N> has 2N latitude rows of 4N points each; an octahedral
grid O<N> shortens the rows toward the poles (4j + 16 points on row j).
"""

import numpy as np

from spheregrid import gaussian_latitudes, grid_from_name

for name in ("F8", "O8", "O32"):
    grid = grid_from_name(name)
    print(f"{name}: {grid.npts} points, {grid.nrows} rows, "
          f"row lengths {grid.nlons[0]} .. {max(grid.nlons)} .. {grid.nlons[-1]}")

# the rows sit on Gaussian latitudes: roots of the Legendre polynomial
lats = gaussian_latitudes(2)
print("\nGaussian latitudes for n=2:", np.round(lats, 6))

# points are addressed by a single global index, rows north to south
grid = grid_from_name("F1")
for g in range(grid.npts):
    p = grid.point(g)
    print(f"  g={g}  lon={p.lon:6.1f}  lat={p.lat:+.4f}")
