"""Command-line surface: grid evaluation, verification suites, mesh export,
normal-map sampling, and the family ODE solver.

Exit codes: 0 success, 2 usage or expression parse error, 3 runtime domain or
numerical error (the first failing grid point is named on stderr).  Output is
deterministic: the same invocation produces byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import gaussmap, verify
from .errors import DomainError, NotAGraphError
from .expressions import ParseError, parse_curve
from .families import (
    FAMILY_TAGS,
    FlatGeneral,
    FlatPower,
    FlatPowerNormalization,
    FlatZeroDet,
    MinimalFamily,
    build_graph,
    curve_from_expression,
    family_curves,
    ode_solve_v,
    CurvePair,
)
from .numerics import OdeError
from .surfaces import Grid, Rect, SurfacePatch, expression_patch

_EPILOG = """\
grids are evaluated over the closed rectangle [x0,x1] x [y0,y1] with inclusive
endpoints, written in row-major order: y varies in the outer loop, x in the
inner loop.  floating-point values are printed with 17 significant digits.

exit codes: 0 success; 2 usage/parse error; 3 runtime domain or numerical
error (verify returns 1 when a mandatory check fails).
"""


def _fmt(value) -> str:
    return format(float(value), ".17g")


class _UsageError(Exception):
    pass


def _add_field_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--f", dest="field", help="surface expression f(x, y)")
    sub.add_argument("--u", dest="curve_u", help="translation-curve expression u(x)")
    sub.add_argument("--v", dest="curve_v", help="translation-curve expression v(y)")
    sub.add_argument("--family", choices=sorted(FAMILY_TAGS), help="built-in family tag")
    sub.add_argument("--A", type=float)
    sub.add_argument("--A1", type=float, default=0.0)
    sub.add_argument("--B", type=float)
    sub.add_argument("--C", type=float)
    sub.add_argument("--C1", type=float)
    sub.add_argument("--C2", type=float, default=1.0)
    sub.add_argument("--C3", type=float, default=0.0)
    sub.add_argument("--K1", type=float)
    sub.add_argument("--K2", type=float)
    sub.add_argument("--normalization",
                     choices=[n.value for n in FlatPowerNormalization],
                     help="how A enters the quadratic curve of flat-power")
    sub.add_argument("--v0", type=float, default=0.0, help="v(y0) for flat-general")
    sub.add_argument("--v0prime", type=float, default=1.0, help="v'(y0) for flat-general")
    sub.add_argument("--y0", type=float, help="where flat-general initial data is imposed")


def _add_grid_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--domain", type=float, nargs=4, default=[-1.0, 1.0, -1.0, 1.0],
                     metavar=("X0", "X1", "Y0", "Y1"))
    sub.add_argument("--grid", type=int, nargs=2, default=[21, 21], metavar=("NX", "NY"))
    sub.add_argument("--out", required=True, help="output file path")


def _require(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n if n != "C1" else "C1") is None]
    if missing:
        raise _UsageError(f"--family {args.family} needs {', '.join(missing)}")


def _family_from_args(args):
    tag = args.family
    if tag == "minimal-eqm":
        _require(args, "C")
        return MinimalFamily(C=args.C)
    if tag == "flat-zero-det":
        _require(args, "A", "C")
        return FlatZeroDet(A=args.A, C=args.C)
    if tag == "flat-power":
        _require(args, "A", "B")
        if args.normalization is None:
            raise _UsageError("--family flat-power needs --normalization")
        return FlatPower(A=args.A, A1=args.A1, B=args.B,
                         normalization=FlatPowerNormalization(args.normalization))
    if tag == "flat-general":
        _require(args, "C1", "K1", "K2")
        return FlatGeneral(C1=args.C1, C2=args.C2, C3=args.C3, K1=args.K1, K2=args.K2,
                           v0=args.v0, v0prime=args.v0prime)
    raise _UsageError(f"unknown family {tag!r}")


def _patch_from_args(args, rect: Rect) -> SurfacePatch:
    if args.field is not None:
        if args.curve_u or args.curve_v or args.family:
            raise _UsageError("give exactly one of --f, --u/--v, or --family")
        return expression_patch(args.field, rect)
    if args.curve_u is not None or args.curve_v is not None:
        if not (args.curve_u and args.curve_v) or args.family:
            raise _UsageError("free-form translation graphs need both --u and --v")
        pair = CurvePair(
            u=curve_from_expression(parse_curve(args.curve_u, var="x")),
            v=curve_from_expression(parse_curve(args.curve_v, var="y")),
        )
        return build_graph(pair, rect)
    if args.family is not None:
        fam = _family_from_args(args)
        pair = family_curves(fam, y_span=(rect.y0, rect.y1), y0=args.y0) \
            if isinstance(fam, FlatGeneral) else family_curves(fam)
        return build_graph(pair, rect)
    raise _UsageError("one of --f, --u/--v, or --family is required")


def _grid_from_args(args) -> Grid:
    x0, x1, y0, y1 = args.domain
    try:
        return Grid(Rect(x0, x1, y0, y1), args.grid[0], args.grid[1])
    except ValueError as e:
        raise _UsageError(str(e)) from None


def _sweep(patch: SurfacePatch, grid: Grid, row):
    """Evaluate row(jet, x, y) over the grid, naming the first failing point."""
    rows = []
    for x, y in grid.points():
        try:
            values = row(patch.field(x, y), x, y)
        except DomainError as e:
            raise DomainError(f"{e}; first failing point (x={_fmt(x)}, y={_fmt(y)})") from None
        if not all(np.isfinite(v) for v in values):
            raise DomainError(f"non-finite value; first failing point (x={_fmt(x)}, y={_fmt(y)})")
        rows.append(values)
    return rows


def _write_lines(path: str, lines) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as sink:
        for line in lines:
            sink.write(line)
            sink.write("\n")


def _cmd_curvature(args) -> int:
    grid = _grid_from_args(args)
    patch = _patch_from_args(args, grid.rect)

    def row(jet, x, y):
        sample = gaussmap.curvature_sample(jet, x, y)
        return (x, y, jet.f, sample.K, sample.H, sample.det_gauss,
                sample.minimal_residual, sample.flat_residual)

    rows = _sweep(patch, grid, row)
    lines = ["x,y,f,K,H,det_gauss,minimal_residual,flat_residual"]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    _write_lines(args.out, lines)
    return 0


def _cmd_gaussmap(args) -> int:
    grid = _grid_from_args(args)
    patch = _patch_from_args(args, grid.rect)

    def row(jet, x, y):
        sample = gaussmap.gauss_map_sample(jet, x, y)
        return (x, y, sample.phi.u, sample.phi.v, sample.det)

    rows = _sweep(patch, grid, row)
    lines = ["x,y,phi_u,phi_v,det"]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    _write_lines(args.out, lines)
    return 0


def _cmd_mesh(args) -> int:
    grid = _grid_from_args(args)
    patch = _patch_from_args(args, grid.rect)
    rows = _sweep(patch, grid, lambda jet, x, y: (x, y, jet.f))

    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in rows]
    nx = grid.nx
    for iy in range(grid.ny - 1):
        for ix in range(nx - 1):
            a = iy * nx + ix + 1
            b = a + 1
            c = b + nx
            d = a + nx
            # counter-clockwise seen from +z
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    _write_lines(args.out, lines)
    return 0


def _cmd_solve_ode(args) -> int:
    fam = FlatGeneral(C1=args.C1, C2=args.C2, C3=args.C3, K1=args.K1, K2=args.K2,
                      v0=args.v0, v0prime=args.v0prime)
    span = (args.span[0], args.span[1])
    provider = ode_solve_v(fam, span, y0=args.y0)
    ys = np.linspace(span[0], span[1], args.samples)
    lines = ["y,v,vp,vpp"]
    for yv in ys:
        jet = provider(float(yv))
        lines.append(",".join(_fmt(v) for v in (yv, jet.f, jet.d1, jet.d2)))
    _write_lines(args.out, lines)
    return 0


def _cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in verify.SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from "
              f"{', '.join(sorted(verify.SUITES))} or all", file=sys.stderr)
        return 2
    names = sorted(verify.SUITES) if args.suite == "all" else [args.suite]
    results = verify.run_suites(names)

    width = max(len(r.name) for r in results)
    for r in results:
        line = f"[{r.status}] {r.name.ljust(width)}  max_error={r.max_error:.3e}"
        if r.detail:
            line += f"  ({r.detail})"
        print(line)
    counts = {s: sum(1 for r in results if r.status == s) for s in ("PASS", "FAIL", "INFO")}
    print(f"PASS: {counts['PASS']}  FAIL: {counts['FAIL']}  INFO: {counts['INFO']}")

    _write_lines(args.summary,
                 [f"{r.name},{r.status},{_fmt(r.max_error)}" for r in results])
    return 0 if counts["FAIL"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h3surf",
        description="curvature, normal-map and verification toolkit for graphs "
                    "z = f(x, y) in the 3-dimensional Heisenberg group",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("curvature", help="CSV of curvature quantities over a grid")
    _add_field_arguments(sub)
    _add_grid_arguments(sub)
    sub.set_defaults(handler=_cmd_curvature)

    sub = subparsers.add_parser("gaussmap", help="CSV of the normal map and its determinant")
    _add_field_arguments(sub)
    _add_grid_arguments(sub)
    sub.set_defaults(handler=_cmd_gaussmap)

    sub = subparsers.add_parser("mesh", help="Wavefront OBJ height-field mesh")
    _add_field_arguments(sub)
    _add_grid_arguments(sub)
    sub.set_defaults(handler=_cmd_mesh)

    sub = subparsers.add_parser("solve-ode", help="integrate the flat-general curve ODE")
    sub.add_argument("--K1", type=float, required=True)
    sub.add_argument("--K2", type=float, required=True)
    sub.add_argument("--C1", type=float, required=True)
    sub.add_argument("--C2", type=float, default=1.0)
    sub.add_argument("--C3", type=float, default=0.0)
    sub.add_argument("--span", type=float, nargs=2, required=True, metavar=("Y0", "Y1"))
    sub.add_argument("--y0", type=float, help="initial-data location (default: span start)")
    sub.add_argument("--v0", type=float, default=0.0)
    sub.add_argument("--v0prime", type=float, default=1.0)
    sub.add_argument("--samples", type=int, default=101)
    sub.add_argument("--out", required=True)
    sub.set_defaults(handler=_cmd_solve_ode)

    sub = subparsers.add_parser("verify", help="run verification suites")
    sub.add_argument("--suite", default="all")
    sub.add_argument("--summary", default="verify-summary.csv",
                     help="machine-readable summary file (name,status,max_error)")
    sub.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, NotAGraphError, OdeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
