"""Command-line driver: ``mortonvox <command> ...``.

Exit codes: 0 success, 2 input or usage error, 3 topological validation
failure (for example an open volume boundary).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import complex as cx
from . import io, morton, operators, sampling, shapes, sparse, stencil
from .errors import BoundaryNotClosedError
from .voxelize import voxelate_point_cloud

EXIT_OK, EXIT_INPUT, EXIT_TOPOLOGY = 0, 2, 3
EMITTABLE = ("G", "D", "L", "s1", "s2", "s3", "Omega")


class UsageError(Exception):
    pass


def parse_sigma(text: str) -> np.ndarray:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --sigma {text!r}") from None
    if len(vals) not in (1, 3) or any(v <= 0 for v in vals):
        raise UsageError("--sigma takes one or three positive values")
    return np.array(vals * 3 if len(vals) == 1 else vals)


def load_stencils(spec: str, cells: bool):
    if spec.startswith("file:"):
        out = [io.read_stencil(spec[5:])]
    elif spec in stencil.KINDS:
        out = [stencil.standard(spec)]
    else:
        raise UsageError(f"unknown stencil {spec!r}")
    if cells:
        out += [stencil.standard(k) for k in ("squareYZ", "squareZX", "squareXY", "cube8")]
    return out


# graph files ------------------------------------------------------------------

def write_graph(X: cx.VoxelComplex, prefix: str, cells: bool):
    io.write_voxel_cloud(X.cloud, f"{prefix}_cloud.csv")
    io.write_matrix(X.M_EV, f"{prefix}_MEV.mtx")
    lo, hi = morton.deinterleave2_array(X.edge_ids.ids)
    io.write_table(f"{prefix}_edges.csv", ["eps", "src", "dst"],
                   [X.edge_ids.ids.tolist(), lo.tolist(), hi.tolist()])
    if cells:
        corner, tag = X.face_frames()
        io.write_table(f"{prefix}_faces.csv", ["id", "corner", "tag"],
                       [X.face_ids.ids.tolist(), corner.tolist(), tag.tolist()])
        io.write_table(f"{prefix}_cells.csv", ["id"], [X.cell_ids.ids.tolist()])
        for name in ("FV", "FE", "CV", "CF", "CE"):
            io.write_matrix(getattr(X, f"M_{name}"), f"{prefix}_M{name}.mtx")


def read_graph(prefix: str) -> cx.VoxelComplex:
    cloud = io.read_voxel_cloud(f"{prefix}_cloud.csv")
    edges = [int(r[0]) for r in io.read_table(f"{prefix}_edges.csv", ["eps", "src", "dst"])]
    faces, cells = [], []
    if os.path.exists(f"{prefix}_faces.csv"):
        faces = [int(r[0]) for r in io.read_table(f"{prefix}_faces.csv", ["id", "corner", "tag"])]
    if os.path.exists(f"{prefix}_cells.csv"):
        cells = [int(r[0]) for r in io.read_table(f"{prefix}_cells.csv", ["id"])]
    return cx.from_ids(cloud, np.array(edges, dtype=np.uint64),
                       np.array(faces, dtype=np.uint64), np.array(cells, dtype=np.uint64),
                       close=False)


def graph_summary(X: cx.VoxelComplex) -> dict:
    n = X.counts
    return {**n, "chi": cx.euler_characteristic(X),
            "chi_VEF": cx.euler_characteristic(X, cells=False)}


def operator_checks(X: cx.VoxelComplex) -> dict:
    checks = {"rowsum": 0.0, "omegaM": 0.0}
    if len(X.edge_ids):
        L = operators.laplacian(X)
        checks["rowsum"] = float(np.max(np.abs(sparse.matvec(L, np.ones(L.cols)))))
    if len(X.face_ids):
        OM = sparse.multiply(X.M_FE, X.M_EV)
        checks["omegaM"] = float(np.max(np.abs(OM.csr.data))) if OM.nnz else 0.0
    return checks


def _print_summary(s: dict, checks: dict | None, as_json: bool):
    if as_json:
        out = {k: s[k] for k in ("V", "E", "F", "C", "chi")}
        out["chi_VEF"] = s["chi_VEF"]
        if checks is not None:
            out["checks"] = checks
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"|V|={s['V']} |E|={s['E']} |F|={s['F']} |C|={s['C']} chi={s['chi']} "
              f"chi_VEF={s['chi_VEF']}")
        if checks is not None:
            print(f"rowsum={checks['rowsum']:.3g} omegaM={checks['omegaM']:.3g}")


# commands -------------------------------------------------------------------

def _sample(args, geometry_path):
    data = io.read_obj(geometry_path)
    sigma = parse_sigma(args.sigma)
    if args.kind == "lines":
        if data.lines is None:
            raise UsageError("input has no line records")
        return sampling.sample_line_network(data.lines, None, sigma, args.mode)
    if data.mesh is None:
        raise UsageError("input has no face records")
    fn = sampling.sample_surface_mesh if args.kind == "surface" else sampling.sample_volume_mesh
    return fn(data.mesh, None, sigma, args.mode)


def cmd_sample(args):
    pts = _sample(args, args.input)
    io.write_points(pts, args.out)
    print(f"points={len(pts)}")


def cmd_voxelate(args):
    pts = io.read_points(args.points)
    cloud = voxelate_point_cloud(pts, None, parse_sigma(args.sigma))
    io.write_voxel_cloud(cloud, args.out)
    print(f"voxels={len(cloud)}")


def cmd_graph(args):
    cloud = io.read_voxel_cloud(args.cloud)
    X = cx.construct(cloud, load_stencils(args.stencil, args.cells))
    write_graph(X, args.out_prefix, args.cells)
    _print_summary(graph_summary(X), operator_checks(X), args.json)


def emit_operators(X, prefix, emit):
    written = []
    needs = {"s2": "faces", "s3": "cells", "Omega": "faces"}
    for name in emit:
        if name not in EMITTABLE:
            raise UsageError(f"cannot emit {name!r}; choose from {EMITTABLE}")
        if name in needs and not len(getattr(X, f"{needs[name][:-1]}_ids")):
            raise UsageError(f"{name} needs {needs[name]}; build the graph with --cells")
        path = f"{prefix}_{name}.mtx"
        if name == "G":
            A = operators.gradient(X)
        elif name == "D":
            A = operators.divergence(X)
        elif name == "L":
            A = operators.laplacian(X)
        elif name == "Omega":
            A = operators.cycle_basis(X)
        else:
            vec = {"s1": operators.integral_line, "s2": operators.integral_surface,
                   "s3": operators.integral_volume}[name](X)
            A = sparse.SparseMatrix.from_dense(vec.reshape(1, -1))
        io.write_matrix(A, path)
        written.append(path)
    return written


def cmd_operators(args):
    X = read_graph(args.graph_prefix)
    emit = [e for e in args.emit.split(",") if e]
    emit_operators(X, args.graph_prefix, emit)
    _print_summary(graph_summary(X), operator_checks(X), args.json)


def cmd_solve_heat(args):
    X = read_graph(args.graph_prefix)
    ids, vals = io.read_field(args.init)
    idx = X.vertex_ids.index(ids)
    if np.any(idx < 0):
        raise UsageError("initial field references unknown vertex ids")
    f0 = np.zeros(len(X.vertex_ids))
    f0[idx] = vals
    try:
        f = operators.solve_heat(X, f0, args.dt, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    io.write_field(X.vertex_ids.ids, f, args.out)
    drift = float(f.sum() - f0.sum())
    if args.json:
        print(json.dumps({"steps": args.steps, "drift": drift}, sort_keys=True))
    else:
        print(f"steps={args.steps} drift={drift:.3g}")


def cmd_run(args):
    os.makedirs(args.out_dir, exist_ok=True)
    prefix = os.path.join(args.out_dir, "P")
    pts = _sample(args, args.input)
    io.write_points(pts, os.path.join(args.out_dir, "points.csv"))
    cloud = voxelate_point_cloud(pts, None, parse_sigma(args.sigma))
    io.write_voxel_cloud(cloud, os.path.join(args.out_dir, "cloud.csv"))
    X = cx.construct(cloud, load_stencils(args.stencil, args.cells))
    write_graph(X, prefix, args.cells)
    emit = ["G", "D", "L", "s1"]
    if len(X.face_ids):
        emit += ["s2", "Omega"]
    if len(X.cell_ids):
        emit += ["s3"]
    emit_operators(X, prefix, emit)
    summary = graph_summary(X)
    checks = operator_checks(X)
    with open(os.path.join(args.out_dir, "summary.json"), "w") as fh:
        json.dump({**summary, "checks": checks}, fh, sort_keys=True, indent=1)
        fh.write("\n")
    _print_summary(summary, checks, args.json)


def cmd_shape(args):
    if args.kind == "icosphere":
        mesh = shapes.icosphere(args.subdivisions, args.radius)
    elif args.kind == "torus":
        mesh = shapes.torus(args.radius, 0.4 * args.radius)
    else:
        mesh = shapes.box((0, 0, 0), (args.radius,) * 3)
    io.write_obj(args.out, mesh=mesh)
    print(f"vertices={len(mesh.vertices)} faces={len(mesh.faces)}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mortonvox", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def sampling_flags(sp):
        sp.add_argument("--input", required=True, help="OBJ file")
        sp.add_argument("--kind", choices=("lines", "surface", "volume"), default="surface")
        sp.add_argument("--sigma", required=True, help="voxel size: s or sx,sy,sz")
        sp.add_argument("--mode", choices=sampling.MODES, default="conservative")

    def graph_flags(sp):
        sp.add_argument("--stencil", default="face6", help="standard kind or file:PATH")
        sp.add_argument("--cells", action="store_true", help="add square faces and cube cells")

    sp = sub.add_parser("sample", help="sample an OBJ into points")
    sampling_flags(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("voxelate", help="voxelize a points CSV")
    sp.add_argument("--points", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_voxelate)

    sp = sub.add_parser("graph", help="build the voxel complex")
    sp.add_argument("--cloud", required=True)
    graph_flags(sp)
    sp.add_argument("--out-prefix", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("operators", help="export operators of a stored graph")
    sp.add_argument("--graph-prefix", required=True)
    sp.add_argument("--emit", default="G,D,L", help=f"comma list from {','.join(EMITTABLE)}")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_operators)

    sp = sub.add_parser("solve-heat", help="explicit heat diffusion on a stored graph")
    sp.add_argument("--graph-prefix", required=True)
    sp.add_argument("--init", required=True, help="CSV id,value")
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_solve_heat)

    sp = sub.add_parser("run", help="sample, voxelate, graph and operators in one go")
    sampling_flags(sp)
    graph_flags(sp)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("shape", help="write an analytic test mesh as OBJ")
    sp.add_argument("--kind", choices=("icosphere", "torus", "box"), default="icosphere")
    sp.add_argument("--subdivisions", type=int, default=3)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_shape)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        args.func(args)
    except BoundaryNotClosedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
