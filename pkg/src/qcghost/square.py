"""Square-lattice QC model with a planar interface at m = 0.

Interactions: first and second neighbours along m, first neighbours along n.
Rows are stored in the positive-diagonal convention.  The ghost force enters
only on the layers m = -1, 0, 1 as ``(-eps, 2*eps, -eps)``.
"""
from __future__ import annotations

import numpy as np

from .lattice import BC, GridSpec, Model, ScalarField
from .stencil import RowBlock, StencilSystem, assemble, assemble_chain, layer_mask

CONTINUUM = {(0, 1): 1.0, (0, -1): 1.0, (1, 0): 5.0, (-1, 0): 5.0}
ATOMISTIC = {(0, 1): 1.0, (0, -1): 1.0, (1, 0): 1.0, (-1, 0): 1.0, (2, 0): 1.0, (-2, 0): 1.0}
INTERFACE = {
    -1: {(0, 1): 1.0, (0, -1): 1.0, (-1, 0): 5.0, (1, 0): 5.0, (2, 0): 0.5},
    0: {(0, 1): 1.0, (0, -1): 1.0, (-1, 0): 5.0, (1, 0): 1.0, (2, 0): 1.0},
    1: {(0, 1): 1.0, (0, -1): 1.0, (-1, 0): 1.0, (1, 0): 1.0, (-2, 0): 0.5, (2, 0): 1.0},
}
# diagonal entries as printed for each row type
DIAGONAL = {"continuum": 12.0, "atomistic": 6.0, -1: 12.5, 0: 9.0, 1: 5.5}
# ghost-force right-hand side in units of eps
GHOST_RHS = {-1: -1.0, 0: 2.0, 1: -1.0}


def row_weights(m: int) -> dict[tuple[int, int], float]:
    if m <= -2:
        return CONTINUUM
    if m >= 2:
        return ATOMISTIC
    return INTERFACE[m]


def assemble_square(grid: GridSpec) -> StencilSystem:
    if grid.model is not Model.SQUARE:
        raise ValueError(f"assemble_square needs a square grid, got {grid.model.value}")
    if grid.bc not in (BC.PERIODIC_X2, BC.DIRICHLET):
        raise ValueError(f"square model supports periodic and dirichlet conditions, got {grid.bc.value}")
    eps = grid.eps
    blocks = [
        RowBlock(layer_mask(grid, lambda m: m <= -2), CONTINUUM),
        RowBlock(layer_mask(grid, lambda m: m >= 2), ATOMISTIC),
    ]
    for layer, w in INTERFACE.items():
        blocks.append(RowBlock(layer_mask(grid, lambda m, k=layer: m == k), w, GHOST_RHS[layer] * eps))
    return assemble(grid, blocks, meta={"model": "square", "bc": grid.bc.value})


# Chain rows exactly as printed: (diagonal, {offset: coefficient}, rhs / eps),
# meaning  diagonal*y(m) + sum c*y(m+offset) = rhs.
_CHAIN_PRINTED = {
    "continuum": (-10.0, {1: 5.0, -1: 5.0}, 0.0),
    "atomistic": (-4.0, {2: 1.0, 1: 1.0, -1: 1.0, -2: 1.0}, 0.0),
    # 1/2 y(1) + 5 y(0) - 21/2 y(-1) + 5 y(-2) = eps
    -1: (-10.5, {2: 0.5, 1: 5.0, -1: 5.0}, 1.0),
    # y(2) + y(1) - 7 y(0) + 5 y(-1) = -2 eps
    0: (-7.0, {2: 1.0, 1: 1.0, -1: 5.0}, -2.0),
    # y(3) + y(2) - 7/2 y(1) + y(0) + 1/2 y(-1) = eps
    1: (-3.5, {2: 1.0, 1: 1.0, -1: 1.0, -2: 0.5}, 1.0),
}


def _chain_row(printed, m: int, eps: float):
    key = "continuum" if m <= -2 else "atomistic" if m >= 2 else m
    d, coeffs, b = printed[key]
    # multiply the printed row by -1
    return -d, dict(coeffs), -b * eps


def reduce_square_1d(M: int) -> StencilSystem:
    """Chain obtained when the planar solution is constant in n."""
    if M < 4 or M % 2:
        raise ValueError(f"M must be even and at least 4, got {M}")
    eps = 1.0 / (2 * M)
    return assemble_chain(M, lambda m: _chain_row(_CHAIN_PRINTED, m, eps),
                          meta={"model": "square", "bc": "chain"})


def square_energy(y: ScalarField | np.ndarray, sys: StencilSystem) -> float:
    """Quadratic energy ``0.5 x.A.x - b.x``; its gradient is the residual."""
    x = sys.from_field(y) if isinstance(y, ScalarField) else np.asarray(y, dtype=float)
    if x.shape != (sys.n_unknowns,):
        raise ValueError(f"expected {sys.n_unknowns} unknowns, got {x.shape}")
    return float(0.5 * x @ (sys.matrix @ x) - sys.rhs @ x)
