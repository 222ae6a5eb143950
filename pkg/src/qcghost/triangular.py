"""Triangular-lattice QC model (first component of the displacement error).

Region assignment by layer: continuum stencil (first shell, weight 4) for
m <= -2, atomistic stencil (both shells, weight 1) for m >= 2, and the three
interfacial stencils on m = -1, 0, 1.

The padded variant surrounds the band |n| <= M with continuum rows.  Bonds that
cross between band and padding take the continuum weight, so the matrix stays
symmetric with zero row sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import BC, TRIANGULAR_STEPS, GridSpec, Model, ScalarField
from .stencil import RowBlock, StencilSystem, assemble, assemble_chain, layer_mask

S = TRIANGULAR_STEPS  # S[i - 1] is s_i


def _weights(pairs: dict[int, float]) -> dict[tuple[int, int], float]:
    return {S[i - 1]: w for i, w in pairs.items()}


CONTINUUM = _weights({i: 4.0 for i in range(1, 7)})
ATOMISTIC = _weights({i: 1.0 for i in range(1, 13)})
INTERFACE = {
    -1: _weights({**{i: 4.0 for i in range(1, 7)}, 12: 0.5}),
    0: _weights({1: 1.0, 6: 1.0, 2: 2.5, 5: 2.5, 3: 4.0, 4: 4.0, 7: 1.0, 11: 1.0, 12: 1.0}),
    1: _weights({**{i: 1.0 for i in range(1, 13)}, 9: 0.5}),
}
DIAGONAL = {"continuum": 24.0, "atomistic": 12.0, -1: 24.5, 0: 18.0, 1: 11.5}
# ghost-force right-hand side in units of eps, positive-diagonal convention
GHOST_RHS = {-1: -0.75, 0: 1.5, 1: -0.75}
# force at the identity map as tabulated (first, second component) in units of eps
GHOST_TABLE = {
    -1: (-0.75, math.sqrt(3.0) / 4.0),
    0: (1.5, -math.sqrt(3.0) / 2.0),
    1: (-0.75, math.sqrt(3.0) / 4.0),
}


def row_weights(m: int) -> dict[tuple[int, int], float]:
    if m <= -2:
        return CONTINUUM
    if m >= 2:
        return ATOMISTIC
    return INTERFACE[m]


def _band_seam(M: int):
    def seam(m, n, mm, nn, off, w):
        crossing = (np.abs(n) <= M) != (np.abs(nn) <= M)
        if crossing.any():
            w = w.copy()
            w[crossing] = CONTINUUM.get(off, 0.0)
        return w
    return seam


def _blocks(grid: GridSpec):
    eps = grid.eps
    if grid.bc is BC.DIRICHLET_PADDED:
        band = np.broadcast_to(np.abs(grid.n_values)[None, :] <= grid.M, grid.shape)
        seam = _band_seam(grid.M)
    else:
        band = np.ones(grid.shape, dtype=bool)
        seam = None
    blocks = [
        RowBlock(layer_mask(grid, lambda m: m <= -2) | ~band, CONTINUUM),
        RowBlock(layer_mask(grid, lambda m: m >= 2) & band, ATOMISTIC),
    ]
    for layer, w in INTERFACE.items():
        mask = layer_mask(grid, lambda m, k=layer: m == k) & band
        blocks.append(RowBlock(mask, w, GHOST_RHS[layer] * eps))
    return blocks, seam


def assemble_triangular(grid: GridSpec) -> StencilSystem:
    if grid.model is not Model.TRIANGULAR:
        raise ValueError(f"assemble_triangular needs a triangular grid, got {grid.model.value}")
    blocks, seam = _blocks(grid)
    return assemble(grid, blocks, seam=seam, meta={"model": "triangular", "bc": grid.bc.value})


@dataclass(frozen=True)
class GhostForce:
    """Both components of the QC force evaluated at the identity map."""

    first: ScalarField
    second: ScalarField


def ghost_force_at_identity(grid: GridSpec) -> GhostForce:
    """Apply the signed QC stencils (negative diagonal) to ``z(x) = x``.

    Evaluated with the full stencil at every node, i.e. as on the unbounded
    lattice; row sums vanish so only the weighted bond vectors contribute.
    """
    if grid.model is not Model.TRIANGULAR:
        raise ValueError("ghost force is defined for the triangular model")
    # accumulate in lattice units, where every weight and step is dyadic and exact
    u1 = np.zeros(grid.shape)
    u2 = np.zeros(grid.shape)
    blocks, seam = _blocks(grid)
    for block in blocks:
        im, jn = np.nonzero(block.mask)
        m = im - grid.M
        n = jn - grid.N
        for (dm, dn), w in block.weights.items():
            wv = np.full(m.shape, float(w))
            if seam is not None:
                wv = seam(m, n, m + dm, n + dn, (dm, dn), wv)
            u1[im, jn] += wv * (dm + 0.5 * dn)
            u2[im, jn] += wv * dn
    eps = grid.eps
    return GhostForce(ScalarField(grid, eps * u1), ScalarField(grid, eps * (math.sqrt(3.0) / 2.0) * u2))


# Chain rows exactly as printed: diagonal*y(m) + sum c*y(m+offset) = rhs (units of eps).
_CHAIN_PRINTED = {
    "continuum": (-16.0, {1: 8.0, -1: 8.0}, 0.0),
    "atomistic": (-10.0, {2: 1.0, 1: 4.0, -1: 4.0, -2: 1.0}, 0.0),
    # 1/2 y(1) + 8 y(0) - 33/2 y(-1) + 8 y(-2) = 3 eps / 4
    -1: (-16.5, {2: 0.5, 1: 8.0, -1: 8.0}, 0.75),
    # y(2) + 4 y(1) - 13 y(0) + 8 y(-1) = -3 eps / 2
    0: (-13.0, {2: 1.0, 1: 4.0, -1: 8.0}, -1.5),
    # y(3) + 4 y(2) - 19/2 y(1) + 4 y(0) + 1/2 y(-1) = 3 eps / 4
    1: (-9.5, {2: 1.0, 1: 4.0, -1: 4.0, -2: 0.5}, 0.75),
}


def reduce_tri_1d(M: int) -> StencilSystem:
    if M < 4 or M % 2:
        raise ValueError(f"M must be even and at least 4, got {M}")
    eps = 1.0 / (2 * M)

    def row(m):
        key = "continuum" if m <= -2 else "atomistic" if m >= 2 else m
        d, coeffs, b = _CHAIN_PRINTED[key]
        return -d, dict(coeffs), -b * eps

    return assemble_chain(M, row, meta={"model": "triangular", "bc": "chain"})


def chain_operator(k1: float, k2: float, M: int) -> StencilSystem:
    """Harmonic chain with nearest (k1) and next-nearest (k2) springs, no forcing."""
    if k1 < 0 or k2 < 0:
        raise ValueError("spring constants must be non-negative")
    if M < 4:
        raise ValueError(f"M must be at least 4, got {M}")
    weights = {1: k1, -1: k1, 2: k2, -2: k2}
    return assemble_chain(M, lambda m: (2 * k1 + 2 * k2, weights, 0.0),
                          meta={"model": "chain", "k1": k1, "k2": k2})
