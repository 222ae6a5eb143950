"""Interfacial layer width: thresholded gradients, width per grid, log-log rate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .lattice import BC, GridSpec, Model, ScalarField, build_grid, forward_difference
from .models import solve_field


@dataclass(frozen=True)
class LayerConfig:
    c0: float = 0.04
    direction: tuple[int, int] = (1, 0)

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")


@dataclass(frozen=True)
class WidthResult:
    eps: float
    width: float
    M: int = 0
    iterations: int = 0


@dataclass(frozen=True)
class RateTable:
    rows: list[WidthResult]
    fitted_rate: float
    interval_slopes: list[float] = field(default_factory=list)

    def to_csv(self, meta: dict | None = None) -> str:
        lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
        lines.append("eps,width")
        lines += [f"{r.eps:.17g},{r.width:.17g}" for r in self.rows]
        if self.interval_slopes:
            lines.append("# interval_slopes=" + ",".join(f"{s:.17g}" for s in self.interval_slopes))
        lines.append(f"# rate={self.fitted_rate:.17g}")
        return "\n".join(lines) + "\n"


def characteristic_set(g: ScalarField | np.ndarray, c0: float, eps: float) -> np.ndarray:
    """Nodes where ``|g| >= c0 * eps``; undefined (NaN) entries are excluded."""
    v = g.values if isinstance(g, ScalarField) else np.asarray(g, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.abs(v) >= c0 * eps


def layer_width(chi: np.ndarray, grid: GridSpec) -> WidthResult:
    """``eps * max over n`` of the m-extent of the marked nodes in column n."""
    chi = np.asarray(chi, dtype=bool)
    if chi.shape != grid.shape:
        raise ValueError(f"mask shape {chi.shape} does not match grid {grid.shape}")
    cols = chi.any(axis=0)
    if not cols.any():
        return WidthResult(grid.eps, 0.0, grid.M)
    m = grid.m_values[:, None]
    top = np.where(chi, m, -np.iinfo(np.int64).max).max(axis=0)[cols]
    bottom = np.where(chi, m, np.iinfo(np.int64).max).min(axis=0)[cols]
    extent = int((top - bottom).max())
    return WidthResult(grid.eps, grid.eps * extent, grid.M)


def _check_rows(rows: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    if len(rows) < 2:
        raise ValueError("rate fit needs at least two rows")
    eps = np.array([r[0] for r in rows], dtype=float)
    width = np.array([r[1] for r in rows], dtype=float)
    if np.any(eps <= 0) or np.any(width <= 0):
        raise ValueError("rate fit needs positive eps and width (width 0 means c0 is too large)")
    return eps, width


def rate_fit(rows: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``ln(width)`` against ``ln(eps)``."""
    eps, width = _check_rows(rows)
    slope, _ = np.polyfit(np.log(eps), np.log(width), 1)
    return float(slope)


def interval_slopes(rows: Sequence[tuple[float, float]]) -> list[float]:
    eps, width = _check_rows(rows)
    return [float(math.log(width[i + 1] / width[i]) / math.log(eps[i + 1] / eps[i]))
            for i in range(len(rows) - 1)]


def measure_width(y: ScalarField, config: LayerConfig = LayerConfig()) -> WidthResult:
    g = forward_difference(y, config.direction)
    return layer_width(characteristic_set(g, config.c0, y.grid.eps), y.grid)


def default_N(M: int, bc: BC) -> int:
    return 3 * M if bc is BC.DIRICHLET_PADDED else M


def run_sweep(model: Model | str, bc: BC | str, M_list: Iterable[int], c0: float = 0.04,
              tol: float = 1e-12, preconditioner: str = "auto") -> RateTable:
    """Solve, differentiate along s1, threshold and measure for each M."""
    model, bc = Model(model), BC(bc)
    config = LayerConfig(c0=c0)
    results = []
    for M in M_list:
        grid = build_grid(M, default_N(M, bc), model, bc)
        y, report = solve_field(grid, tol=tol, preconditioner=preconditioner)
        w = measure_width(y, config)
        results.append(WidthResult(w.eps, w.width, M, report.iterations))
    pairs = [(r.eps, r.width) for r in results]
    if any(w <= 0 for _, w in pairs) or len(pairs) < 2:
        return RateTable(results, math.nan, [])
    return RateTable(results, rate_fit(pairs), interval_slopes(pairs))
