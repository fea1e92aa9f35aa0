"""Command-line front end.

Subcommands: info, grid (describe/point), mesh, partition, remap.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import platform
import sys

import numpy as np
import scipy

from . import runtime
from .analytic import FieldSpec
from .errors import SpheregridError
from .field import dump_field
from .functionspace import NodeColumns, StructuredColumns, gather_field
from .gmsh import save_gmsh
from .grid import grid_from_name
from .interp import apply_remap, build_remap
from .mesh import generate_mesh
from .parallel import run_ranks
from .partition import blocks_partition, matching_partition

_BUILD_TIMESTAMP = "20260301000000"


def _info_block() -> str:
    lines = [
        f"spheregrid version ({runtime.VERSION}), build ({runtime.BUILD_ID})",
        "",
        "Build:",
        "  build type     : Release",
        f"  timestamp      : {_BUILD_TIMESTAMP}",
        f"  op. system     : {platform.system()}",
        f"  processor      : {platform.machine()}",
        f"  python         : {platform.python_version()}",
        "",
        "Features:",
    ]
    for name, on in runtime.FEATURES.items():
        lines.append(f"  {name:<15}: {'ON' if on else 'OFF'}")
    lines += [
        "",
        "Dependencies:",
        f"  numpy version ({np.__version__})",
        f"  scipy version ({scipy.__version__})",
    ]
    return "\n".join(lines) + "\n"


def cmd_info(args) -> int:
    if args.version:
        print(runtime.VERSION)
    elif args.git:
        print(runtime.BUILD_ID)
    else:
        sys.stdout.write(_info_block())
    return 0


def cmd_grid_describe(args) -> int:
    grid = grid_from_name(args.name)
    doc = grid.describe()
    if args.format == "structured":
        print(json.dumps(doc, indent=2))
    else:
        print(f"name : {doc['name']}")
        print(f"kind : {doc['kind']}")
        print(f"n    : {doc['n']}")
        print(f"npts : {doc['npts']}")
        print("rows :")
        for row in doc["rows"]:
            print(f"  {row['lat']:+.8f} {row['nlon']}")
    return 0


def cmd_grid_point(args) -> int:
    grid = grid_from_name(args.name)
    p = grid.point(args.index)
    print(f"{p.lon:.17g} {p.lat:.17g}")
    return 0


def cmd_mesh(args) -> int:
    grid = grid_from_name(args.name)
    dist = blocks_partition(grid, args.parts)
    if args.parts == 1:
        mesh = generate_mesh(grid, dist, 0, halo=args.halo, include_pole=args.pole)
        save_gmsh(mesh, args.out, coords=args.coords)
        print(f"wrote {args.out}")
    else:
        for part in range(args.parts):
            mesh = generate_mesh(grid, dist, part, halo=args.halo, include_pole=args.pole)
            path = f"{args.out}.p{part}"
            save_gmsh(mesh, path, coords=args.coords)
        print(f"wrote {args.out}.p0 .. {args.out}.p{args.parts - 1}")
    return 0


def cmd_partition(args) -> int:
    grid = grid_from_name(args.name)
    dist = blocks_partition(grid, args.parts)
    doc = json.dumps(dist.to_dict())
    if args.out:
        with open(args.out, "w") as f:
            f.write(doc + "\n")
        print(f"wrote {args.out}")
    else:
        print(doc)
    return 0


def run_remap_pipeline(source_name, target_name, nparts, field_spec, halo=2):
    """Distributed remap: blocks-decompose the source, slave the target to
    it, build and apply weights locally on every rank, gather to rank 0.

    Returns (gathered (npts_target,) array, analytic target values,
    per-rank message counts during build+apply)."""
    source = grid_from_name(source_name)
    target = grid_from_name(target_name)
    spec = FieldSpec(field_spec)

    def program(ctx):
        dist = blocks_partition(source, ctx.nranks)
        mesh = generate_mesh(source, dist, ctx.rank, halo=halo, include_pole=True)
        fs = NodeColumns(mesh, ctx if ctx.nranks > 1 else None)
        target_dist = matching_partition(target, source, dist)

        f = fs.create_field("src")
        owned = fs.owned_row_index()
        f.host[owned, 0] = spec(mesh.node_xyz[owned])
        fs.halo_exchange(f, ctx if ctx.nranks > 1 else None)

        sent_before = ctx.messages_sent
        weights = build_remap(fs, target, target_dist, ctx)
        tfs = StructuredColumns(target, target_dist, ctx.rank)
        tf = tfs.create_field("dst")
        apply_remap(weights, f, tf)
        messages = ctx.messages_sent - sent_before

        gathered = gather_field(tfs, tf, ctx if ctx.nranks > 1 else None)
        return gathered, messages

    results = run_ranks(nparts, program)
    gathered = results[0][0][:, 0]
    messages = [r[1] for r in results]
    analytic = spec(target.xyz())
    return gathered, analytic, messages


def cmd_remap(args) -> int:
    gathered, analytic, messages = run_remap_pipeline(
        args.source, args.target, args.parts, args.field
    )
    target = grid_from_name(args.target)
    from .field import Kind, create_field

    out_field = create_field("remap", (target.npts, 1), Kind.REAL64)
    out_field.host[:, 0] = gathered
    with open(args.out, "w") as f:
        dump_field(out_field, np.arange(target.npts), f)
    if args.report:
        err = np.abs(gathered - analytic)
        print(f"max_error: {err.max():.17g}")
        print(f"rms_error: {np.sqrt(np.mean(err**2)):.17g}")
        print(f"messages_during_interpolation: {sum(messages)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spheregrid")
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="version/build/feature information")
    g = p_info.add_mutually_exclusive_group()
    g.add_argument("--version", action="store_true")
    g.add_argument("--git", action="store_true")
    g.add_argument("--info", action="store_true")
    p_info.set_defaults(func=cmd_info)

    p_grid = sub.add_parser("grid", help="grid queries")
    grid_sub = p_grid.add_subparsers(dest="grid_command", required=True)
    p_desc = grid_sub.add_parser("describe")
    p_desc.add_argument("name")
    p_desc.add_argument("--format", choices=["text", "structured"], default="text")
    p_desc.set_defaults(func=cmd_grid_describe)
    p_point = grid_sub.add_parser("point")
    p_point.add_argument("name")
    p_point.add_argument("index", type=int)
    p_point.set_defaults(func=cmd_grid_point)

    p_mesh = sub.add_parser("mesh", help="generate Gmsh mesh files")
    p_mesh.add_argument("name")
    p_mesh.add_argument("--parts", type=int, default=1)
    p_mesh.add_argument("--halo", type=int, default=0)
    p_mesh.add_argument("--pole", action="store_true")
    p_mesh.add_argument("--coords", choices=["xyz", "lonlat"], default="xyz")
    p_mesh.add_argument("--out", required=True)
    p_mesh.set_defaults(func=cmd_mesh)

    p_part = sub.add_parser("partition", help="blocks distribution")
    p_part.add_argument("name")
    p_part.add_argument("--parts", type=int, required=True)
    p_part.add_argument("--out")
    p_part.set_defaults(func=cmd_partition)

    p_remap = sub.add_parser("remap", help="remap an analytic field between grids")
    p_remap.add_argument("--source", required=True)
    p_remap.add_argument("--target", required=True)
    p_remap.add_argument("--parts", type=int, default=1)
    p_remap.add_argument("--field", required=True)
    p_remap.add_argument("--out", required=True)
    p_remap.add_argument("--report", action="store_true")
    p_remap.set_defaults(func=cmd_remap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    lib = runtime.initialise(argv)
    try:
        return args.func(args)
    except SpheregridError as exc:
        lib.log.error(str(exc))
        return 1
    finally:
        runtime.finalise()


if __name__ == "__main__":
    sys.exit(main())
