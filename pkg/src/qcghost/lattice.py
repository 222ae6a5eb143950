"""Index spaces, scalar fields and discrete differences on the two lattices.

Nodes are labelled by lattice coordinates ``(m, n)`` with ``-M <= m <= M`` and
``-N <= n <= N``.  A field is stored densely as an array of shape
``(2M+1, 2N+1)`` with ``values[m + M, n + N] == y(m, n)``; constrained nodes
hold zero.  Layers are lines of constant ``m`` and the coupling interface is the
line ``m = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Model(enum.Enum):
    TRIANGULAR = "triangular"
    SQUARE = "square"


class BC(enum.Enum):
    PERIODIC_X2 = "periodic"
    DIRICHLET = "dirichlet"
    DIRICHLET_PADDED = "padded"


class GridError(ValueError):
    """Invalid grid parameters."""


class NodeIndex(NamedTuple):
    m: int
    n: int


# Triangular lattice steps in (m, n) coordinates, s1..s12.
# First shell: a1, a2, -a1+a2, -a1, -a2, a1-a2.
# Second shell: a1+a2, -a1+2a2, -2a1+a2, -a1-a2, a1-2a2, 2a1-a2.
TRIANGULAR_STEPS: tuple[tuple[int, int], ...] = (
    (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1),
    (1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1),
)

SQUARE_STEPS: tuple[tuple[int, int], ...] = (
    (1, 0), (0, 1), (-1, 0), (0, -1), (2, 0), (-2, 0),
)


@dataclass(frozen=True)
class DirectionSet:
    """Interaction steps of a lattice, split into first and second shells."""

    first: tuple[tuple[int, int], ...]
    second: tuple[tuple[int, int], ...]

    @property
    def steps(self) -> tuple[tuple[int, int], ...]:
        return self.first + self.second

    def step(self, i: int) -> tuple[int, int]:
        """1-based access, ``step(1) == s1``."""
        return self.steps[i - 1]


def direction_set(model: Model) -> DirectionSet:
    if model is Model.TRIANGULAR:
        return DirectionSet(TRIANGULAR_STEPS[:6], TRIANGULAR_STEPS[6:])
    # square: first neighbours in both directions, second neighbours along m only
    return DirectionSet(SQUARE_STEPS[:4], SQUARE_STEPS[4:])


@dataclass(frozen=True)
class GridSpec:
    M: int
    N: int
    eps: float
    model: Model
    bc: BC

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.M + 1, 2 * self.N + 1)

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @property
    def n_values(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def periodic(self) -> bool:
        return self.bc is BC.PERIODIC_X2

    def free_mask(self) -> np.ndarray:
        """Boolean array over the index rectangle marking the unknowns.

        ``m = -M`` and ``m = M`` are pinned in every case (the phantom column
        ``m = M+1`` lies outside the rectangle).  Dirichlet variants pin
        ``n = +-N``; the periodic variant identifies ``n = N`` with ``n = -N``
        and keeps ``n = -N`` as the representative.
        """
        mask = np.zeros(self.shape, dtype=bool)
        mask[1:-1, :] = True
        if self.periodic:
            mask[:, -1] = False
        else:
            mask[:, 0] = False
            mask[:, -1] = False
        return mask

    def free_nodes(self) -> np.ndarray:
        """Free nodes as an ``(n_free, 2)`` array of ``(m, n)``, row-major in m."""
        im, jn = np.nonzero(self.free_mask())
        return np.column_stack([im - self.M, jn - self.N])

    def row_index(self) -> np.ndarray:
        """Dense map from the index rectangle to unknown number, -1 if constrained."""
        mask = self.free_mask()
        index = np.full(self.shape, -1, dtype=np.int64)
        index[mask] = np.arange(int(mask.sum()))
        return index

    def contains(self, m, n) -> np.ndarray | bool:
        return (np.abs(m) <= self.M) & (np.abs(n) <= self.N)


def build_grid(M: int, N: int, model: Model | str, bc: BC | str) -> GridSpec:
    model = Model(model)
    bc = BC(bc)
    if M < 2 or N < 2:
        raise GridError(f"M and N must be at least 2, got M={M}, N={N}")
    if M % 2:
        raise GridError(f"M must be even, got M={M}")
    if bc is BC.DIRICHLET_PADDED:
        if model is not Model.TRIANGULAR:
            raise GridError("padded Dirichlet conditions exist only for the triangular model")
        if N != 3 * M:
            raise GridError(f"padded grids need N = 3M, got M={M}, N={N}")
    return GridSpec(M=M, N=N, eps=1.0 / (2 * M), model=model, bc=bc)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Per-node values over the full index rectangle of ``grid``.

    Entries that are undefined (e.g. a forward difference whose neighbour leaves
    the rectangle) are NaN.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} does not match grid {self.grid.shape}")

    def __call__(self, m: int, n: int) -> float:
        return float(self.values[m + self.grid.M, n + self.grid.N])

    def row(self, m: int) -> np.ndarray:
        """Values on layer ``m`` ordered by n."""
        return self.values[m + self.grid.M]

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))


def _wrap_n(n: np.ndarray, N: int) -> np.ndarray:
    # period 2N, representative window [-N, N)
    return (n + N) % (2 * N) - N


def shift(y: ScalarField, s: tuple[int, int]) -> ScalarField:
    """Translate a field: ``shift(y, s)(p) == y(p + s)``; NaN where p + s is off-grid."""
    g = y.grid
    m = g.m_values[:, None] + s[0]
    n = g.n_values[None, :] + s[1]
    if g.periodic:
        n = np.broadcast_to(_wrap_n(n, g.N), (m.shape[0], n.shape[1]))
        m = np.broadcast_to(m, n.shape)
        inside = np.abs(m) <= g.M
    else:
        m, n = np.broadcast_arrays(m, n)
        inside = g.contains(m, n)
    out = np.full(g.shape, np.nan)
    out[inside] = y.values[m[inside] + g.M, n[inside] + g.N]
    return ScalarField(g, out)


def forward_difference(y: ScalarField, s: tuple[int, int]) -> ScalarField:
    """``(y(p + s) - y(p)) / eps``, NaN where ``p + s`` leaves the grid."""
    return ScalarField(y.grid, (shift(y, s).values - y.values) / y.grid.eps)


def physical_position(idx: NodeIndex | tuple[int, int], grid: GridSpec) -> tuple[float, float]:
    m, n = idx
    if not grid.contains(m, n):
        raise IndexError(f"node {(m, n)} outside grid M={grid.M}, N={grid.N}")
    eps = grid.eps
    if grid.model is Model.TRIANGULAR:
        return (eps * (m + 0.5 * n), eps * n * math.sqrt(3.0) / 2.0)
    return (eps * m, eps * n)


def physical_positions(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``physical_position`` over the whole rectangle."""
    m = grid.m_values[:, None].astype(float)
    n = grid.n_values[None, :].astype(float)
    if grid.model is Model.TRIANGULAR:
        x1 = grid.eps * (m + 0.5 * n)
        x2 = grid.eps * n * (math.sqrt(3.0) / 2.0)
    else:
        x1 = grid.eps * m + 0.0 * n
        x2 = grid.eps * n + 0.0 * m
    return np.broadcast_arrays(x1, x2)
