"""Command-line entry point.

Exit codes: 0 success, 2 validation error, 3 solver failure, 4 verification failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .analytic import eval_solution
from .bounds import bound_sweep, reports_to_csv
from .lattice import BC, GridError, Model, build_grid, forward_difference
from .layers import characteristic_set, default_N, layer_width, run_sweep
from .models import SolverFailure, assemble_system, solve_field
from .solver import solve_cg
from .triangular import GHOST_TABLE, ghost_force_at_identity

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4
COMPARE_RTOL = 1e-6


class UsageError(ValueError):
    pass


def parse_int_list(text: str) -> list[int]:
    """``"10,20,40"`` or a doubling range ``"2..256"`` (2, 4, ..., 256)."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(t) for t in text.split("..", 1))
        if lo < 1 or hi < lo:
            raise UsageError(f"invalid range {text!r}")
        out, v = [], lo
        while v <= hi:
            out.append(v)
            v *= 2
        return out
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"invalid integer list {text!r}") from exc


def _meta(args, grid=None, **extra) -> dict:
    meta = {"command": args.command, "model": args.model, "bc": args.bc}
    if grid is not None:
        meta.update(M=grid.M, N=grid.N, eps=io.fmt(grid.eps))
    meta.update(c0=args.c0, tol=args.tol)
    meta.update(extra)
    return meta


def _grid(args):
    if args.M is None:
        raise UsageError("--M is required")
    M = parse_int_list(args.M)
    if len(M) != 1:
        raise UsageError("this command takes a single --M")
    bc = BC(args.bc)
    N = parse_int_list(args.N)[0] if args.N is not None else default_N(M[0], bc)
    return build_grid(M[0], N, args.model, bc)


def cmd_solve(args) -> int:
    grid = _grid(args)
    y, report = solve_field(grid, tol=args.tol)
    out = Path(args.out)
    meta = _meta(args, grid, iterations=report.iterations,
                 relative_residual=io.fmt(report.final_relative_residual))
    io.write_text(out / "solution.csv", io.field_csv(y, meta))
    io.write_text(out / "gradient.csv", io.gradient_csv(y, meta))
    chi1 = characteristic_set(forward_difference(y, (1, 0)), args.c0, grid.eps)
    chi2 = characteristic_set(forward_difference(y, (0, 1)), args.c0, grid.eps)
    if args.chi_out:
        io.write_text(args.chi_out, io.pgm_text(chi1))
    if args.chi2_out:
        io.write_text(args.chi2_out, io.pgm_text(chi2))
    w = layer_width(chi1, grid)
    print(f"solved {grid.model.value}/{grid.bc.value} M={grid.M} N={grid.N}: "
          f"{report.iterations} iterations, relative residual {report.final_relative_residual:.3e}, "
          f"width(s1)={w.width:.6g}")
    return EXIT_OK


def _require_square_dirichlet(args):
    if Model(args.model) is not Model.SQUARE or BC(args.bc) is not BC.DIRICHLET:
        raise UsageError("the series solution exists only for --model square --bc dirichlet")


def cmd_analytic(args) -> int:
    _require_square_dirichlet(args)
    grid = _grid(args)
    sol = eval_solution(grid)
    io.write_text(Path(args.out) / "analytic.csv", io.field_csv(sol.values, _meta(args, grid)))
    print(f"series solution M={grid.M} N={grid.N}: max|y| = {np.abs(sol.values.values).max():.6g}")
    return EXIT_OK


def cmd_compare(args) -> int:
    _require_square_dirichlet(args)
    grid = _grid(args)
    sys_ = assemble_system(grid)
    x, report = solve_cg(sys_, tol=args.tol)
    if not report.converged:
        raise SolverFailure(report)
    numeric = sys_.to_field(x).values
    series = eval_solution(grid).values.values
    diff = float(np.abs(numeric - series).max())
    rel = diff / float(np.abs(numeric).max())
    print(f"sup|numeric - series| = {diff:.3e}, relative = {rel:.3e}")
    return EXIT_OK if rel <= COMPARE_RTOL else EXIT_VERIFY


def cmd_sweep(args) -> int:
    if args.M is None:
        raise UsageError("--M is required")
    Ms = parse_int_list(args.M)
    for M in Ms:
        build_grid(M, default_N(M, BC(args.bc)), args.model, args.bc)
    table = run_sweep(args.model, args.bc, Ms, c0=args.c0, tol=args.tol)
    text = table.to_csv(_meta(args, M_list=",".join(map(str, Ms))))
    io.write_text(Path(args.out) / "rate.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    Ns = parse_int_list(args.N) if args.N is not None else parse_int_list("2..256")
    factors = parse_int_list(args.M_factors)
    reports = bound_sweep(Ns, factors)
    io.write_text(Path(args.out) / "bounds.csv", reports_to_csv(reports))
    failed = [r for r in reports if not r.satisfied]
    print(f"{len(reports)} checks, {len(failed)} unsatisfied")
    for name in sorted({r.name for r in failed}):
        n = sum(r.name == name for r in failed)
        print(f"  {name}: {n} unsatisfied")
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_ghost_force(args) -> int:
    if Model(args.model) is not Model.TRIANGULAR:
        raise UsageError("the ghost-force table is defined for the triangular model")
    grid = _grid(args)
    force = ghost_force_at_identity(grid)
    eps = grid.eps
    rows = []
    for m in grid.m_values.tolist():
        t1, t2 = GHOST_TABLE.get(m, (0.0, 0.0))
        rows.append((m, force.first(m, 0), force.second(m, 0), t1 * eps, t2 * eps))
    text = io.csv_text(["m", "f1_direct", "f2_direct", "f1_table", "f2_table"], rows, _meta(args, grid))
    io.write_text(Path(args.out) / "ghost_force.csv", text)
    for m, f1, f2, t1, t2 in rows:
        if f1 != 0.0 or f2 != 0.0:
            print(f"m={m:+d}: direct ({f1 / eps:+.6g}, {f2 / eps:+.6g}) eps, table ({t1 / eps:+.6g}, {t2 / eps:+.6g}) eps")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "analytic": cmd_analytic,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "verify-bounds": cmd_verify_bounds,
    "ghost-force": cmd_ghost_force,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcghost", description="QC ghost-force lattice models")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--model", choices=[m.value for m in Model],
                       default="triangular" if name == "ghost-force" else "square")
        s.add_argument("--bc", choices=[b.value for b in BC], default="dirichlet")
        s.add_argument("--M", help="half-width in m; a list such as 10,20,40 for sweep")
        s.add_argument("--N", help="half-width in n; a doubling range such as 2..256 for verify-bounds")
        s.add_argument("--c0", type=float, default=0.04)
        s.add_argument("--tol", type=float, default=1e-12)
        s.add_argument("--out", default=".")
        if name == "solve":
            s.add_argument("--chi-out", help="PGM path for the s1 characteristic set")
            s.add_argument("--chi2-out", help="PGM path for the s2 characteristic set")
        if name == "verify-bounds":
            s.add_argument("--M-factors", default="1,2", help="M = factor * N for each factor")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not 0.0 < args.tol < 1.0:
            raise UsageError("--tol must lie in (0, 1)")
        if not args.c0 > 0 or not math.isfinite(args.c0):
            raise UsageError("--c0 must be positive")
        return COMMANDS[args.command](args)
    except (UsageError, GridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
