"""Text serialisation: CSV with ``#`` metadata lines and ASCII PGM masks.

Floats are written with 17 significant digits and LF line endings so that
identical runs produce byte-identical files.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lattice import ScalarField, forward_difference, physical_positions


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence], meta: Mapping | None = None) -> str:
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def field_csv(y: ScalarField, meta: Mapping | None = None) -> str:
    """Columns ``m, n, x1, x2, y`` ordered by (m, n)."""
    g = y.grid
    x1, x2 = physical_positions(g)
    mm, nn = np.meshgrid(g.m_values, g.n_values, indexing="ij")
    rows = zip(mm.ravel().tolist(), nn.ravel().tolist(), x1.ravel(), x2.ravel(), y.values.ravel())
    return csv_text(["m", "n", "x1", "x2", "y"], rows, meta)


def gradient_csv(y: ScalarField, meta: Mapping | None = None) -> str:
    """Columns ``m, n, ds1, ds2``; ``nan`` where the neighbour is off-grid."""
    g = y.grid
    d1 = forward_difference(y, (1, 0)).values
    d2 = forward_difference(y, (0, 1)).values
    mm, nn = np.meshgrid(g.m_values, g.n_values, indexing="ij")
    rows = zip(mm.ravel().tolist(), nn.ravel().tolist(), d1.ravel(), d2.ravel())
    return csv_text(["m", "n", "ds1", "ds2"], rows, meta)


def pgm_text(chi: np.ndarray) -> str:
    """ASCII P2 image of a mask over the index rectangle.

    Image columns are m = -M..M and image rows n = N..-N (positive n on top);
    marked nodes are 255, others 0.
    """
    chi = np.asarray(chi, dtype=bool)
    img = np.where(chi, 255, 0).T[::-1]
    h, w = img.shape
    lines = ["P2", f"{w} {h}", "255"]
    lines += [" ".join(map(str, row)) for row in img.tolist()]
    return "\n".join(lines) + "\n"


def read_pgm(text: str) -> np.ndarray:
    """Inverse of ``pgm_text``: returns the mask indexed ``[m + M, n + N]``."""
    tokens = [t for line in text.splitlines() if not line.startswith("#") for t in line.split()]
    if tokens[0] != "P2":
        raise ValueError("not an ASCII PGM")
    w, h = int(tokens[1]), int(tokens[2])
    vals = np.array(tokens[4:4 + w * h], dtype=int).reshape(h, w)
    return (vals[::-1].T == 255)
