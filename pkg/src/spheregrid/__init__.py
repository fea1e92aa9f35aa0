"""spheregrid: data structures for weather/climate-style codes.

Structured global grids (full and octahedral Gaussian), unstructured
sphere meshes with domain decomposition and halo exchange, fields with
host/device memory mirroring, and linear element-based remapping between
grids with matching decompositions.
"""

from .errors import SpheregridError
from .field import Field, FieldSet, Intent, Kind, MemoryState, create_field
from .functionspace import (
    HaloExchangePlan,
    NodeColumns,
    StructuredColumns,
    build_exchange_plan,
    checksum,
    format_checksum,
    gather_field,
    halo_exchange,
    scatter_field,
)
from .gaussian import gaussian_latitudes
from .geometry import (
    PointLonLat,
    PointXYZ,
    RotationSpec,
    lonlat_to_xyz,
    rotate,
    unrotate,
    xyz_to_lonlat,
)
from .grid import (
    Grid,
    GridKind,
    GridSpec,
    build_grid,
    grid_from_name,
    grid_point,
    parse_grid_name,
    render_grid_name,
)
from .interp import (
    InterpolationWeights,
    SphericalTriangle,
    apply_remap,
    barycentric_weights,
    build_remap,
    contains,
)
from .mesh import Connectivity, Element, Mesh, Node, Shape, generate_mesh, mesh_stats
from .parallel import RankContext, run_ranks
from .partition import (
    Distribution,
    PointCloudIndex,
    blocks_partition,
    matching_partition,
    nearest_point,
)
from .runtime import VERSION as __version__  # noqa: N811
from .runtime import finalise, initialise
