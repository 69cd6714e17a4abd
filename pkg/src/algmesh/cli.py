"""Command-line interface.

Subcommands cover every pipeline stage: ``dims``, ``basemesh``, ``mesh``,
``verify-norming``, ``nodes``, ``approx`` and ``lebesgue``.  Report commands
write a CSV into the output directory and render a companion PNG figure
unless ``--no-plots`` is given.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import pipeline, plots
from .basemesh import CDISK, RDISK, SEGMENT, cdisk_mesh, rdisk_mesh, segment_mesh
from .errors import AlgmeshError
from .lift import write_mesh_csv, write_points_csv
from .pipeline import (
    APPROX_COLUMNS,
    DIMS_COLUMNS,
    LEBESGUE_COLUMNS,
    VERIFY_COLUMNS,
    ExperimentConfig,
    config_from_json,
    parse_range,
    write_rows_csv,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--surface", help="builtin id (sphere, cubic_surface, cubic_curve, viviani) or surface file")
    common.add_argument("--n", help="degree range start:step:stop (or start:stop, or a single value)")
    common.add_argument("--lambda", dest="lam", type=int, help="override the base mesh lambda")
    common.add_argument("--seed", type=int, help="random seed for trial polynomials")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--control-degree", type=int, help="degree of the control mesh (default 30)")
    common.add_argument("--trials", type=int, help="random trials for verify-norming (default 200)")
    common.add_argument("--no-plots", action="store_true", help="skip figure rendering")

    p = _Parser(prog="algmesh", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("dims", parents=[common], help="restricted-space dimension table")

    bm = sub.add_parser("basemesh", parents=[common], help="generate a base mesh")
    bm.add_argument("--kind", choices=[SEGMENT, CDISK, RDISK], default=SEGMENT)
    bm.add_argument("--a", default="-1", help="segment endpoint (complex literal)")
    bm.add_argument("--b", default="1", help="segment endpoint (complex literal)")
    bm.add_argument("--center", default="0,0", help="disk center: complex literal (cdisk) or x,y (rdisk)")
    bm.add_argument("--radius", type=float, default=1.0)

    sub.add_parser("mesh", parents=[common], help="build and export norming meshes")

    vn = sub.add_parser("verify-norming", parents=[common], help="empirical norming check")
    vn.add_argument("--ell-offset", type=int, default=0,
                    help="shift the base index (negative values deliberately under-index)")

    nd = sub.add_parser("nodes", parents=[common], help="export extracted interpolation nodes")
    nd.add_argument("--method", choices=["afp", "dlp"], default="afp")

    ap = sub.add_parser("approx", parents=[common], help="interpolation/least-squares error sweep")
    ap.add_argument("--methods", default="afp,dlp,ls", help="comma list of afp,dlp,ls")
    ap.add_argument("--functions", default="f1,f2,f3,f4", help="comma list of f1..f4")

    lb = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constant sweep")
    lb.add_argument("--methods", default="afp,dlp,ls", help="comma list of afp,dlp,ls")
    return p


_DEFAULT_DEGREES = {
    "dims": tuple(range(0, 17)),
    "mesh": (4,),
    "verify-norming": tuple(range(1, 9)),
    "nodes": (4,),
    "approx": tuple(range(2, 17, 2)),
    "lebesgue": tuple(range(1, 17)),
    "basemesh": (4,),
}


def _config_from_args(args) -> ExperimentConfig:
    cfg = config_from_json(args.config) if args.config else ExperimentConfig()
    over = {}
    if args.surface:
        over["surface"] = args.surface
    if args.n:
        over["degrees"] = parse_range(args.n)
    elif not args.config:
        over["degrees"] = _DEFAULT_DEGREES[args.command]
    if args.lam is not None:
        over["lam"] = args.lam
    if args.seed is not None:
        over["seed"] = args.seed
    if args.out:
        over["out"] = args.out
    if args.control_degree is not None:
        over["control_degree"] = args.control_degree
    if args.trials is not None:
        over["trials"] = args.trials
    if args.no_plots:
        over["plots"] = False
    if getattr(args, "ell_offset", None):
        over["ell_offset"] = args.ell_offset
    if getattr(args, "methods", None):
        over["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    if getattr(args, "functions", None):
        over["functions"] = tuple(f.strip() for f in args.functions.split(",") if f.strip())
    cfg = replace(cfg, **over)
    cfg.validate()
    return cfg


def _outdir(cfg):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_dims(cfg):
    rows = pipeline.run_dims(cfg)
    name = pipeline.resolve_example(cfg).name
    print(f"restricted-space dimensions for {name}")
    for r in rows:
        note = f"  ({r['note']})" if r["note"] else ""
        print(f"  n={r['n']:3d}  dim={r['dim']}{note}")
    out = _outdir(cfg)
    write_rows_csv(out / f"dims_{name}.csv", rows, DIMS_COLUMNS)
    print(f"wrote {out / f'dims_{name}.csv'}")
    return 0


def _cmd_basemesh(cfg, args):
    from .basemesh import default_lambda

    n = cfg.degrees[0]
    lam = cfg.lam if cfg.lam is not None else default_lambda(args.kind, n)
    if args.kind == SEGMENT:
        mesh = segment_mesh(complex(args.a), complex(args.b), lam, n)
    elif args.kind == CDISK:
        mesh = cdisk_mesh(complex(args.center.split(",")[0]), args.radius, lam, n)
    else:
        cx, cy = (float(v) for v in args.center.split(","))
        mesh = rdisk_mesh((cx, cy), args.radius, lam, n)
    out = _outdir(cfg)
    path = out / f"basemesh_{args.kind}_l{lam}_n{n}.csv"
    header = (
        f"# surface={args.kind} n={n} ell={n} lambda={lam} "
        f"constant={mesh.constant:.12g} card={mesh.card}"
    )
    write_points_csv(path, mesh.points, header)
    print(f"{mesh.domain.describe()}: card={mesh.card} constant={mesh.constant:.6g}")
    print(f"wrote {path}")
    if cfg.plots:
        fig = out / f"basemesh_{args.kind}_l{lam}_n{n}.png"
        plots.render_points(mesh.points, fig, f"{args.kind} mesh, lambda={lam}, n={n}")
        print(f"wrote {fig}")
    return 0


def _cmd_mesh(cfg):
    example = pipeline.resolve_example(cfg)
    out = _outdir(cfg)
    for n in cfg.degrees:
        mesh = pipeline.build_mesh_for(example, n, cfg.lam, 0)
        path = out / f"mesh_{example.name}_n{n}.csv"
        write_mesh_csv(mesh, path)
        c = "uncertified" if mesh.constant is None else f"{mesh.constant:.6g}"
        print(
            f"{example.name} n={n}: card={mesh.card} ell={mesh.ell} "
            f"lambda={mesh.base.lam} constant={c} residual={mesh.max_residual:.2e}"
        )
        if mesh.constant is None:
            print("  note: general construction; constant is uncertified "
                  "(run verify-norming for an empirical ratio)")
        if mesh.degenerate_fibers:
            print(f"  note: {mesh.degenerate_fibers} base points have an all-zero fiber")
        if mesh.complex_fibers:
            print(f"  note: {mesh.complex_fibers} lifted points kept complex coordinates")
        print(f"wrote {path}")
        if cfg.plots:
            fig = out / f"mesh_{example.name}_n{n}.png"
            plots.render_points(mesh.points, fig, f"{example.title}, n={n}, card={mesh.card}")
            print(f"wrote {fig}")
    return 0


def _cmd_verify(cfg):
    example = pipeline.resolve_example(cfg)
    rows = pipeline.run_verify_norming(cfg)
    out = _outdir(cfg)
    path = out / f"verify_{example.name}.csv"
    write_rows_csv(path, rows, VERIFY_COLUMNS)
    failed = False
    for r in rows:
        c = "uncertified" if r["constant"] is None else f"{r['constant']:.6g}"
        print(
            f"n={r['n']:3d} ell={r['ell']:4d} card={r['card']:6d} "
            f"constant={c:>12s} empirical={r['empirical']:.6g} {r['status']}"
        )
        failed = failed or r["status"] == "fail"
    print(f"wrote {path}")
    if cfg.plots:
        fig = out / f"verify_{example.name}.png"
        plots.render_norming(rows, fig, f"norming check, {example.title}")
        print(f"wrote {fig}")
    if failed:
        print("verification FAILED: an empirical ratio exceeds the certified constant", file=sys.stderr)
        return 3
    return 0


def _cmd_nodes(cfg, args):
    example = pipeline.resolve_example(cfg)
    out = _outdir(cfg)
    for n, mesh, nodes in pipeline.run_nodes(cfg, args.method):
        path = out / f"nodes_{args.method}_{example.name}_n{n}.csv"
        header = (
            f"# surface={example.name} n={n} ell={mesh.ell} lambda={mesh.base.lam} "
            f"constant=uncertified card={len(nodes)}"
        )
        write_points_csv(path, nodes, header)
        print(f"{example.name} n={n}: {len(nodes)} {args.method} nodes")
        print(f"wrote {path}")
        if cfg.plots:
            fig = out / f"nodes_{args.method}_{example.name}_n{n}.png"
            plots.render_points(nodes, fig, f"{args.method} nodes, {example.title}, n={n}")
            print(f"wrote {fig}")
    return 0


def _cmd_approx(cfg):
    example = pipeline.resolve_example(cfg)
    rows = pipeline.run_approx(cfg)
    out = _outdir(cfg)
    path = out / f"approx_{example.name}.csv"
    write_rows_csv(path, rows, APPROX_COLUMNS)
    for r in rows:
        print(
            f"n={r['n']:3d} {r['method']:3s} {r['f_tag']}: rel_error={r['rel_error']:.3e} "
            f"lebesgue={r['lebesgue']:.4g} nodes={r['card_nodes']}"
        )
    print(f"wrote {path}")
    if cfg.plots:
        fig = out / f"approx_{example.name}.png"
        plots.render_errors(rows, fig, f"approximation errors, {example.title}")
        print(f"wrote {fig}")
    return 0


def _cmd_lebesgue(cfg):
    example = pipeline.resolve_example(cfg)
    rows = pipeline.run_lebesgue(cfg)
    out = _outdir(cfg)
    path = out / f"lebesgue_{example.name}.csv"
    write_rows_csv(path, rows, LEBESGUE_COLUMNS)
    for r in rows:
        print(f"n={r['n']:3d} {r['method']:3s}: lebesgue={r['lebesgue']:.6g} nodes={r['card_nodes']}")
    print(f"wrote {path}")
    if cfg.plots:
        fig = out / f"lebesgue_{example.name}.png"
        plots.render_lebesgue(rows, fig, f"Lebesgue constants, {example.title}")
        print(f"wrote {fig}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "dims":
            return _cmd_dims(cfg)
        if args.command == "basemesh":
            return _cmd_basemesh(cfg, args)
        if args.command == "mesh":
            return _cmd_mesh(cfg)
        if args.command == "verify-norming":
            return _cmd_verify(cfg)
        if args.command == "nodes":
            return _cmd_nodes(cfg, args)
        if args.command == "approx":
            return _cmd_approx(cfg)
        if args.command == "lebesgue":
            return _cmd_lebesgue(cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except AlgmeshError as exc:
        print(f"numeric failure [{exc.code}]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
