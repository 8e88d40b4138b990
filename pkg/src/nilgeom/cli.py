"""``nilgeom`` command line.

Every subcommand prints a JSON report on stdout.  Data products (meshes,
sample tables) go to ``--out`` in the chosen ``--format``; for ``json`` the
report itself is written there.  Exit codes: 0 success, 2 invalid input,
3 numerical failure, 4 request outside the model's range.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time

import numpy as np

from . import kernels, verify as verify_mod
from .core import ORIGIN
from .errors import InvalidInput, NilGeometryError
from .geodesic import sample_geodesic, solve_geodesic
from .io import Report, dumps, load_config, parse_box, parse_point, write_csv, write_json, write_obj

log = logging.getLogger("nilgeom")

DEFAULTS = {
    "n": None, "format": None, "out": None, "jobs": 1, "seed": 0, "suite": "all",
    "tol_distance": 1e-9, "tol_surface": 1e-5, "tol_ratio": 1e-6,
}
# flags holding several points
MULTI = {"triangle"}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("obj", "csv", "json"), default=None)
    p.add_argument("--n", type=int, default=None, help="resolution or sample count")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol-distance", type=float, default=None)
    p.add_argument("--tol-surface", type=float, default=None)
    p.add_argument("--tol-ratio", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilgeom", description="Geometry of the Heisenberg model space.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        return p

    p = cmd("distance", "geodesic distance and all solution branches")
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--to", default=None)
    p = cmd("geodesic", "sample the minimizing geodesic between two points")
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--to", default=None)
    p = cmd("sphere", "geodesic sphere mesh")
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--from", dest="from_", default=None, help="center (default origin)")
    p = cmd("apollonius", "Apollonius surface mesh")
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--to", default=None)
    p.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p.add_argument("--box", default=None, help="x0,y0,z0,x1,y1,z1")
    p = cmd("triangle-surface", "sampled triangle surface mesh")
    p.add_argument("--triangle", nargs=3, default=None)
    p.add_argument("--l1", type=float, default=None, help="single sample instead of a grid")
    p.add_argument("--l2", type=float, default=None)
    p = cmd("surface-line", "connecting curve on a triangle surface")
    p.add_argument("--triangle", nargs=3, default=None)
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--to", default=None)
    p = cmd("ceva", "Ceva configuration and ratio products")
    p.add_argument("--triangle", nargs=3, default=None)
    p.add_argument("--d1", type=float, default=None)
    p.add_argument("--d2", type=float, default=None)
    p = cmd("verify", "deterministic invariant suites")
    p.add_argument("--suite", default=None, choices=("all",) + tuple(verify_mod.SUITES))
    return ap


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in cfg.items():
        attr = {"from": "from_", "lambda": "lambda_"}.get(key, key)
        if not hasattr(args, attr):
            raise InvalidInput(f"config key {key!r} does not apply to {args.command}")
        if getattr(args, attr) is None:
            setattr(args, attr, value.split() if attr in MULTI else value)
    for key, value in DEFAULTS.items():
        if key in vars(args) and getattr(args, key) is None:
            setattr(args, key, value)
    # config values arrive as strings
    for attr, typ in (("n", int), ("jobs", int), ("seed", int), ("R", float), ("lambda_", float),
                      ("l1", float), ("l2", float), ("d1", float), ("d2", float),
                      ("tol_distance", float), ("tol_surface", float), ("tol_ratio", float)):
        v = getattr(args, attr, None)
        if isinstance(v, str):
            try:
                setattr(args, attr, typ(v))
            except ValueError as exc:
                raise InvalidInput(f"bad value for {attr}: {v!r}") from exc
    for attr in ("tol_distance", "tol_surface", "tol_ratio"):
        if not getattr(args, attr) > 0:
            raise InvalidInput(f"{attr.replace('_', '-')} must be positive")
    if args.jobs < 1:
        raise InvalidInput("jobs must be at least 1")
    return args


def _need(args, attr, flag):
    v = getattr(args, attr, None)
    if v is None:
        raise InvalidInput(f"{flag} is required")
    return v


def _triangle(args):
    pts = _need(args, "triangle", "--triangle")
    if len(pts) != 3:
        raise InvalidInput("--triangle takes three points")
    return tuple(parse_point(p) for p in pts)


def _echo(args) -> dict:
    skip = {"command", "config"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k.rstrip("_")] = v
    return out


def _emit_data(args, report, default_fmt, header=None, rows=None, mesh=None):
    """Write the data product; ``json`` embeds any table in the report instead."""
    fmt = args.format or default_fmt
    if fmt == "json":
        if rows is not None:
            report.results["table"] = {"header": list(header), "rows": [list(r) for r in rows]}
        args.json_out = args.out
        return
    if args.out is None:
        return
    if fmt == "obj":
        if mesh is None:
            raise InvalidInput(f"{args.command} produces no mesh; use csv or json")
        write_obj(args.out, mesh.vertices, mesh.faces)
    else:
        if mesh is not None:
            write_csv(args.out, ["x", "y", "z"], [tuple(v) for v in mesh.vertices])
        elif rows is not None:
            write_csv(args.out, header, rows)
        else:
            raise InvalidInput(f"{args.command} produces no table; use json")
    report.results["output"] = {"path": str(args.out), "format": fmt}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_distance(args, report: Report):
    p = parse_point(_need(args, "from_", "--from"))
    q = parse_point(_need(args, "to", "--to"))
    sol = solve_geodesic(p, q)
    report.results.update({
        "distance": sol.params.t,
        "params": dict(sol.params._asdict()),
        "branches": [dict(b._asdict()) for b in sol.branches],
        "residual": sol.residual,
    })
    report.check("round-trip", "distance:two-point-problem", sol.residual, args.tol_distance)
    if sol.ambiguous:
        report.warnings.append(f"{sol.branch_count} geodesic branches join the points")
    _emit_data(args, report, "json", ["alpha", "theta", "t"], [tuple(b) for b in sol.branches])


def cmd_geodesic(args, report: Report):
    p = parse_point(_need(args, "from_", "--from"))
    q = parse_point(_need(args, "to", "--to"))
    n = args.n or 33
    if n < 2:
        raise InvalidInput("need at least two samples")
    sol = solve_geodesic(p, q)
    ts = np.linspace(0.0, sol.params.t, n)
    pts = sample_geodesic(p, sol.params, ts)
    report.results.update({"params": dict(sol.params._asdict()), "samples": n})
    report.check("endpoint", "geodesic:closed-form", float(np.linalg.norm(pts[-1] - np.array(q))),
                 args.tol_distance)
    _emit_data(args, report, "csv", ["t", "x", "y", "z"],
               [(float(t), *map(float, r)) for t, r in zip(ts, pts)])


def cmd_sphere(args, report: Report):
    from .surfaces import sphere_mesh
    R = _need(args, "R", "--R")
    center = parse_point(args.from_) if args.from_ else ORIGIN
    n = args.n or 32
    mesh = sphere_mesh(center, R, n, n)
    err = float(np.max(np.abs(kernels.distances(np.array(center), mesh.vertices) - R)))
    report.results.update({"R": R, "vertices": len(mesh.vertices), "faces": len(mesh.faces),
                           "euler_characteristic": mesh.euler_characteristic})
    report.check("vertex-distance", "sphere:definition", err, 1e-6)
    _emit_data(args, report, "obj", mesh=mesh)


def cmd_apollonius(args, report: Report):
    from .surfaces import apollonius_sample
    p = parse_point(_need(args, "from_", "--from"))
    q = parse_point(_need(args, "to", "--to"))
    lam = _need(args, "lambda_", "--lambda")
    box = parse_box(args.box) if args.box else None
    mesh = apollonius_sample(p, q, lam, box=box, resolution=args.n or 64)
    ratio = mesh.tags["ratio"]
    rel = float(np.max(np.abs(ratio - lam)) / lam) if lam > 0 and math.isfinite(lam) else math.nan
    report.results.update({"lambda": lam, "vertices": len(mesh.vertices), "faces": len(mesh.faces)})
    if math.isfinite(rel):
        report.check("vertex-ratio", "apollonius:definition", rel, 1e-2)
    _emit_data(args, report, "obj", mesh=mesh)


def cmd_triangle_surface(args, report: Report):
    from .surfaces import constraint_errors, triangle_surface_mesh, triangle_surface_point
    A = _triangle(args)
    if args.l1 is not None or args.l2 is not None:
        sp = triangle_surface_point(*A, _need(args, "l1", "--l1"), _need(args, "l2", "--l2"),
                                    seed=args.seed)
        report.results.update({"point": list(sp.point), "d0": sp.d0, "ambiguous": sp.ambiguous})
        if math.isfinite(sp.lam1) and math.isfinite(sp.lam2) and sp.lam1 > 0 and sp.lam2 > 0:
            err = max(constraint_errors(*A, sp.point, sp.lam1, sp.lam2))
            report.check("ratio-constraints", "triangle-surface:definition", err, args.tol_surface)
        _emit_data(args, report, "json", ["x", "y", "z"], [tuple(sp.point)])
        return
    surf, mesh = triangle_surface_mesh(*A, n=args.n or 16, jobs=args.jobs)
    worst = 0.0
    lam = surf.lam
    for i in range(len(lam)):
        for j in range(len(lam)):
            if 0 < lam[i] < math.inf and 0 < lam[j] < math.inf and np.all(np.isfinite(surf.points[i, j])):
                worst = max(worst, max(constraint_errors(*A, surf.points[i, j], lam[i], lam[j])))
    report.results.update({"kind": surf.kind, "vertices": len(mesh.vertices), "faces": len(mesh.faces),
                           "holes": [{"lam": list(h[0]), "reason": h[1]} for h in surf.holes],
                           "ambiguous": int(surf.ambiguous.sum())})
    report.check("ratio-constraints", "triangle-surface:definition", worst, args.tol_surface)
    _emit_data(args, report, "obj", mesh=mesh)


def cmd_surface_line(args, report: Report):
    from .triangle import surface_line
    A = _triangle(args)
    p = parse_point(_need(args, "from_", "--from"))
    q = parse_point(_need(args, "to", "--to"))
    line = surface_line(A, p, q, n_samples=args.n or 17)
    report.results.update({"case": line.case, "samples": len(line.points), "roots": line.roots,
                           "theta": line.theta,
                           "anchor": list(line.anchor) if line.anchor is not None else None})
    if line.arc is not None and line.arc.kind == "circle-arc":
        report.results["circle"] = {"center": list(line.arc.center), "radius": line.arc.radius}
    report.warnings.extend(line.warnings)
    _emit_data(args, report, "csv", ["x", "y", "z"], [tuple(map(float, r)) for r in line.points])


def cmd_ceva(args, report: Report):
    from .triangle import ceva_config
    A = _triangle(args)
    cfg = ceva_config(*A, _need(args, "d1", "--d1"), _need(args, "d2", "--d2"))
    report.results.update({
        "kind": cfg.kind, "P12": list(cfg.P12), "P02": list(cfg.P02), "P01": list(cfg.P01),
        "T_star": list(cfg.T_star), "T": list(cfg.T) if cfg.T is not None else None,
        "product": cfg.product, "product_projected": cfg.product_projected,
        "third_cevian_miss": cfg.third_cevian_miss,
    })
    report.check("ceva-product", "ceva:distance-product", abs(cfg.product - 1.0), args.tol_ratio)
    if cfg.product_projected is not None:
        report.check("ceva-projected-product", "ceva:projected-product",
                     abs(cfg.product_projected - 1.0), args.tol_ratio)
    report.warnings.extend(cfg.warnings)
    _emit_data(args, report, "json")


def cmd_verify(args, report: Report):
    res = verify_mod.run(args.suite, args.seed)
    report.results.update(res.results)
    report.checks.extend(res.checks)
    report.warnings.extend(res.warnings)
    _emit_data(args, report, "json")


COMMANDS = {
    "distance": cmd_distance, "geodesic": cmd_geodesic, "sphere": cmd_sphere,
    "apollonius": cmd_apollonius, "triangle-surface": cmd_triangle_surface,
    "surface-line": cmd_surface_line, "ceva": cmd_ceva, "verify": cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    report = Report(args.command, {})
    t0 = time.perf_counter()
    code = 0
    try:
        args = _merge_config(args)
        report.args = _echo(args)
        COMMANDS[args.command](args, report)
        if not report.ok:
            code = 1
            log.error("failed checks: %s", ", ".join(c.name for c in report.checks if not c.passed))
    except NilGeometryError as exc:
        code = exc.exit_code
        report.error = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
        log.error("%s: %s", type(exc).__name__, exc)
    report.elapsed = time.perf_counter() - t0
    log.info("%s finished in %.3f s", args.command, report.elapsed)
    if getattr(args, "json_out", None):
        write_json(args.json_out, report.as_dict())
    sys.stdout.write(dumps(report.as_dict()))
    return code


if __name__ == "__main__":
    sys.exit(main())
