import math

import numpy as np
import pytest

from qcghost.lattice import BC, ScalarField, build_grid
from qcghost.layers import (
    LayerConfig, RateTable, WidthResult, characteristic_set, default_N, interval_slopes,
    layer_width, measure_width, rate_fit, run_sweep,
)

TABLE3 = [0.8, 0.55, 0.363, 0.256, 0.184]
TABLE1 = [0.35, 0.23, 0.15, 0.094, 0.063, 0.052]


def _eps(n):
    return [5e-2 * 2.0**-j for j in range(n)]


def test_characteristic_set_basics():
    g = build_grid(4, 4, "square", "dirichlet")
    assert not characteristic_set(ScalarField.zeros(g), 0.04, g.eps).any()
    v = np.zeros(g.shape)
    v[3, 2] = 2 * 0.04 * g.eps
    chi = characteristic_set(v, 0.04, g.eps)
    assert chi.sum() == 1 and chi[3, 2]
    v[0, 0] = np.nan
    assert not characteristic_set(v, 0.04, g.eps)[0, 0]


def test_layer_width():
    g = build_grid(10, 4, "square", "dirichlet")
    chi = np.zeros(g.shape, dtype=bool)
    assert layer_width(chi, g).width == 0.0
    chi[10 - 2:10 + 3, 4] = True  # m = -2..2 in column n = 0
    chi[10 - 1:10 + 1, 5] = True
    assert layer_width(chi, g).width == pytest.approx(4 * g.eps)
    with pytest.raises(ValueError):
        layer_width(chi[:-1], g)


def test_rate_fit_reference_tables():
    assert rate_fit(list(zip(_eps(5), TABLE3))) == pytest.approx(0.53, abs=0.01)
    assert rate_fit(list(zip(_eps(6), TABLE1))) == pytest.approx(0.57, abs=0.01)


def test_rate_fit_exact_power_law():
    eps = _eps(6)
    assert rate_fit([(e, e**0.5) for e in eps]) == pytest.approx(0.5, abs=1e-12)
    assert interval_slopes([(e, 3 * e**0.25) for e in eps]) == pytest.approx([0.25] * 5, abs=1e-12)


def test_rate_fit_validation():
    with pytest.raises(ValueError):
        rate_fit([(0.1, 0.2)])
    with pytest.raises(ValueError, match="c0"):
        rate_fit([(0.1, 0.0), (0.05, 0.1)])


def test_measure_width_linear_field():
    g = build_grid(8, 4, "square", "dirichlet")
    # gradient eps along s1 everywhere: width covers every layer with a forward neighbour
    y = ScalarField(g, g.eps**2 * g.m_values[:, None] * np.ones(g.shape))
    w = measure_width(y, LayerConfig(c0=0.5))
    assert w.width == pytest.approx((2 * 8 - 1) * g.eps)
    with pytest.raises(ValueError):
        LayerConfig(c0=0.0)


def test_default_N():
    assert default_N(10, BC.DIRICHLET_PADDED) == 30
    assert default_N(10, BC.DIRICHLET) == 10


def test_small_sweep_and_csv():
    t = run_sweep("triangular", "dirichlet", [10, 20])
    assert len(t.rows) == 2 and math.isfinite(t.fitted_rate)
    assert t.rows[0].width == pytest.approx(0.6)
    text = t.to_csv({"model": "triangular"})
    lines = text.splitlines()
    assert lines[0] == "# model=triangular" and lines[1] == "eps,width"
    assert lines[-1].startswith("# rate=")


def test_zero_width_gives_nan_rate():
    t = run_sweep("square", "dirichlet", [4, 8], c0=1e6)
    assert all(r.width == 0 for r in t.rows) and math.isnan(t.fitted_rate)
    assert isinstance(t, RateTable) and isinstance(t.rows[0], WidthResult)
