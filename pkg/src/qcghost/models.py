"""Dispatch from a grid to its assembled system and numeric solution."""
from __future__ import annotations

from .lattice import GridSpec, Model, ScalarField
from .solver import SolveReport, solve_cg
from .square import assemble_square
from .stencil import StencilSystem
from .triangular import assemble_triangular


class SolverFailure(RuntimeError):
    def __init__(self, report: SolveReport):
        super().__init__(f"CG did not converge: {report.iterations} iterations, "
                         f"relative residual {report.final_relative_residual:.3e}")
        self.report = report


def assemble_system(grid: GridSpec) -> StencilSystem:
    if grid.model is Model.SQUARE:
        return assemble_square(grid)
    return assemble_triangular(grid)


def solve_field(grid: GridSpec, tol: float = 1e-12, preconditioner: str = "auto",
                max_iter: int | None = None) -> tuple[ScalarField, SolveReport]:
    """Assemble and solve; raises ``SolverFailure`` if CG does not converge."""
    sys = assemble_system(grid)
    x, report = solve_cg(sys, tol=tol, max_iter=max_iter, preconditioner=preconditioner)
    if not report.converged:
        raise SolverFailure(report)
    return sys.to_field(x), report
