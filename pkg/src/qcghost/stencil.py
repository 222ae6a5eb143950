"""Sparse symmetric stencil systems and the generic assembler behind both models.

Every row is written in the positive-diagonal convention: a row with
neighbour weights ``w_s`` reads ``(sum_s w_s) y(p) - sum_s w_s y(p + s) = b(p)``.
Neighbours that are constrained (pinned to zero) or fall outside the index
rectangle simply drop out of the row; the diagonal keeps their weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .lattice import GridSpec, ScalarField, _wrap_n

Offset = tuple[int, int]


@dataclass(frozen=True, eq=False)
class StencilSystem:
    """``matrix @ x = rhs`` over the unknown nodes.

    ``nodes`` is ``(n_unknowns, 2)`` of ``(m, n)`` for planar systems and
    ``(n_unknowns,)`` of ``m`` for chains.  ``grid`` is None for chains, whose
    index range is ``-M..M`` (plus the phantom ``M+1``).
    """

    matrix: sp.csr_matrix
    rhs: np.ndarray
    nodes: np.ndarray
    grid: GridSpec | None = None
    M: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_unknowns(self) -> int:
        return self.matrix.shape[0]

    @property
    def eps(self) -> float:
        if self.grid is not None:
            return self.grid.eps
        return 1.0 / (2 * self.M)

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x - self.rhs

    def to_field(self, x: np.ndarray) -> ScalarField:
        """Scatter an unknown vector onto the full index rectangle."""
        g = self.grid
        if g is None:
            raise TypeError("chain systems have no planar field; use to_chain")
        values = np.zeros(g.shape)
        values[self.nodes[:, 0] + g.M, self.nodes[:, 1] + g.N] = x
        if g.periodic:
            values[:, -1] = values[:, 0]
        return ScalarField(g, values)

    def from_field(self, y: ScalarField) -> np.ndarray:
        g = self.grid
        return y.values[self.nodes[:, 0] + g.M, self.nodes[:, 1] + g.N].copy()

    def to_chain(self, x: np.ndarray) -> np.ndarray:
        """Chain values on ``m = -M..M`` (boundary entries zero)."""
        out = np.zeros(2 * self.M + 1)
        out[self.nodes + self.M] = x
        return out

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


# A seam rule receives (m, n, neighbour m, neighbour n, offset, weights) for a
# batch of rows and returns the weights to use for those bonds.
SeamRule = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray, Offset, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RowBlock:
    """A set of rows sharing one stencil and one right-hand-side value."""

    mask: np.ndarray
    weights: Mapping[Offset, float]
    rhs: float = 0.0


def assemble(grid: GridSpec, blocks: Iterable[RowBlock], seam: SeamRule | None = None,
             meta: dict | None = None) -> StencilSystem:
    """Assemble rows for every free node covered by ``blocks``.

    Blocks must cover each free node exactly once.
    """
    free = grid.free_mask()
    index = grid.row_index()
    n_free = int(free.sum())
    covered = np.zeros(grid.shape, dtype=np.int64)

    rows, cols, vals = [], [], []
    diag = np.zeros(n_free)
    rhs = np.zeros(n_free)
    for block in blocks:
        sel = block.mask & free
        covered += sel
        im, jn = np.nonzero(sel)
        if im.size == 0:
            continue
        m = im - grid.M
        n = jn - grid.N
        r = index[im, jn]
        rhs[r] = block.rhs
        for off, w in block.weights.items():
            mm = m + off[0]
            nn = n + off[1]
            if grid.periodic:
                nn = _wrap_n(nn, grid.N)
            wv = np.full(m.shape, float(w))
            if seam is not None:
                wv = seam(m, n, mm, nn, off, wv)
            diag[r] += wv
            inside = grid.contains(mm, nn)
            c = np.full(m.shape, -1, dtype=np.int64)
            c[inside] = index[mm[inside] + grid.M, nn[inside] + grid.N]
            keep = (c >= 0) & (wv != 0.0)
            rows.append(r[keep])
            cols.append(c[keep])
            vals.append(-wv[keep])

    if np.any(covered[free] != 1):
        raise ValueError("row blocks must cover every free node exactly once")

    rows.append(np.arange(n_free))
    cols.append(np.arange(n_free))
    vals.append(diag)
    A = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_free, n_free),
    ).tocsr()
    A.sum_duplicates()
    A.eliminate_zeros()
    return StencilSystem(A, rhs, grid.free_nodes(), grid=grid, meta=dict(meta or {}))


def layer_mask(grid: GridSpec, predicate: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Rows whose layer index m satisfies ``predicate``."""
    m = grid.m_values[:, None]
    return np.broadcast_to(predicate(m), grid.shape)


def assemble_chain(M: int, row_for_m: Callable[[int], tuple[float, Mapping[int, float], float]],
                   meta: dict | None = None) -> StencilSystem:
    """Chain system on ``m = -M+1..M-1`` with ``y(-M) = y(M) = y(M+1) = 0``.

    ``row_for_m(m)`` returns ``(diagonal, {offset: weight}, rhs)`` in
    positive-diagonal form, i.e. ``diagonal*y(m) - sum w*y(m+offset) = rhs``.
    """
    nodes = np.arange(-M + 1, M)
    n = nodes.size
    rows, cols, vals = [], [], []
    rhs = np.zeros(n)
    for i, m in enumerate(nodes):
        d, weights, b = row_for_m(int(m))
        rhs[i] = b
        for off, w in weights.items():
            j = m + off
            if -M < j < M and w != 0.0:
                rows.append(i)
                cols.append(j + M - 1)
                vals.append(-w)
        rows.append(i)
        cols.append(i)
        vals.append(d)
    A = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    A.sum_duplicates()
    return StencilSystem(A, rhs, nodes, grid=None, M=M, meta=dict(meta or {}))


def chain_from_planar(weights: Mapping[Offset, float]) -> dict[int, float]:
    """Collapse a planar stencil onto m for fields constant in n.

    Couplings within the same layer cancel against the diagonal and are dropped.
    """
    out: dict[int, float] = {}
    for (dm, _dn), w in weights.items():
        if dm != 0:
            out[dm] = out.get(dm, 0.0) + w
    return out
