import math

import numpy as np
import pytest

from qcghost.lattice import TRIANGULAR_STEPS as S, build_grid
from qcghost.solver import solve_dense
from qcghost.stencil import chain_from_planar
from qcghost.triangular import (
    DIAGONAL, GHOST_RHS, GHOST_TABLE, assemble_triangular, chain_operator,
    ghost_force_at_identity, reduce_tri_1d, row_weights,
)


def _row(sys, m, n):
    idx = {tuple(p): i for i, p in enumerate(sys.nodes.tolist())}
    i = idx[(m, n)]
    row = sys.matrix.getrow(i)
    return ({(int(sys.nodes[j][0] - m), int(sys.nodes[j][1] - n)): float(v)
             for j, v in zip(row.indices, row.data)}, float(sys.rhs[i]))


@pytest.fixture(scope="module")
def sys8():
    return assemble_triangular(build_grid(8, 8, "triangular", "dirichlet"))


def test_layer_zero_row(sys8):
    row, b = _row(sys8, 0, 0)
    expected = {S[0]: -1, S[5]: -1, S[1]: -2.5, S[4]: -2.5, S[2]: -4, S[3]: -4,
                S[6]: -1, S[10]: -1, S[11]: -1, (0, 0): 18}
    assert row == {k: float(v) for k, v in expected.items()}
    assert b == 1.5 * sys8.eps


def test_far_field_rows(sys8):
    row, b = _row(sys8, -4, 0)
    assert row == {**{s: -4.0 for s in S[:6]}, (0, 0): 24.0} and b == 0.0
    row, b = _row(sys8, 4, 0)
    assert row == {**{s: -1.0 for s in S}, (0, 0): 12.0} and b == 0.0


def test_diagonals_equal_row_sums():
    for m, key in [(-3, "continuum"), (3, "atomistic"), (-1, -1), (0, 0), (1, 1)]:
        assert sum(row_weights(m).values()) == DIAGONAL[key]
    assert DIAGONAL[-1] == 49 / 2 and DIAGONAL[1] == 23 / 2


def test_ghost_rhs_alternates():
    assert [GHOST_RHS[m] for m in (-1, 0, 1)] == [-0.75, 1.5, -0.75]


def test_matrix_symmetric_all_bcs():
    for M, N, bc in [(8, 8, "dirichlet"), (8, 4, "periodic"), (4, 12, "padded")]:
        A = assemble_triangular(build_grid(M, N, "triangular", bc)).matrix
        assert abs(A - A.T).max() == 0.0
        assert np.all(A.diagonal() > 0)


def test_padded_rhs_only_inside_band():
    g = build_grid(4, 12, "triangular", "padded")
    s = assemble_triangular(g)
    n = s.nodes[:, 1]
    assert np.all(s.rhs[np.abs(n) > 4] == 0.0)
    assert np.count_nonzero(s.rhs) == 3 * 9


def test_padded_interior_rows_balanced():
    # rows away from the pinned boundary keep zero row sums, including across the seam
    s = assemble_triangular(build_grid(4, 12, "triangular", "padded"))
    A = s.matrix
    m, n = s.nodes[:, 0], s.nodes[:, 1]
    interior = (np.abs(m) <= 1) & (np.abs(n) <= 9)
    sums = np.asarray(A.sum(axis=1)).ravel()
    assert np.abs(sums[interior]).max() == 0.0


def test_ghost_force_layers_and_ratio():
    g = build_grid(10, 10, "triangular", "dirichlet")
    f = ghost_force_at_identity(g)
    eps = g.eps
    for m in range(-10, 11):
        f1, f2 = f.first.row(m), f.second.row(m)
        if abs(m) >= 2:
            assert np.all(f1 == 0.0) and np.all(f2 == 0.0)
        else:
            assert np.all(np.abs(np.abs(f1) - abs(GHOST_TABLE[m][0]) * eps) <= 1e-14)
            np.testing.assert_allclose(f2 + f1 / math.sqrt(3.0), 0.0, atol=1e-14)


def test_ghost_force_sign_is_opposite_to_table():
    g = build_grid(4, 4, "triangular", "dirichlet")
    f = ghost_force_at_identity(g)
    for m in (-1, 0, 1):
        assert f.first(m, 0) == pytest.approx(-GHOST_TABLE[m][0] * g.eps)
        assert f.second(m, 0) == pytest.approx(-GHOST_TABLE[m][1] * g.eps)


def test_ghost_force_rejects_square():
    with pytest.raises(ValueError):
        ghost_force_at_identity(build_grid(4, 4, "square", "dirichlet"))


def test_reduction_printed_row():
    c = reduce_tri_1d(8)
    i = list(c.nodes).index(-1)
    row = c.matrix.getrow(i)
    coeffs = {int(c.nodes[j]) + 1: -v for j, v in zip(row.indices, row.data)}
    # printed: 1/2 y(1) + 8 y(0) - 33/2 y(-1) + 8 y(-2) = 3 eps / 4
    assert coeffs == {2: 0.5, 1: 8.0, 0: -16.5, -1: 8.0}
    assert -c.rhs[i] == 0.75 * c.eps


def test_chain_operator_matches_interior_rows():
    tri = reduce_tri_1d(8).matrix.toarray()
    k41 = chain_operator(4.0, 1.0, 8).matrix.toarray()
    # planar continuum rows collapse to k1 = 8 (two first-shell bonds per side)
    assert chain_from_planar(row_weights(-4)) == {1: 8.0, -1: 8.0}
    assert chain_from_planar(row_weights(4)) == {1: 4.0, -1: 4.0, 2: 1.0, -2: 1.0}
    i = 8 - 1 + 4
    np.testing.assert_array_equal(tri[i], k41[i])


def test_chain_operator_laplacian_and_validation():
    L = chain_operator(1.0, 0.0, 4).matrix.toarray()
    assert L[2, 1:4].tolist() == [-1.0, 2.0, -1.0]
    with pytest.raises(ValueError):
        chain_operator(-1.0, 1.0, 4)


def test_periodic_solution_matches_chain():
    g = build_grid(8, 4, "triangular", "periodic")
    s = assemble_triangular(g)
    y = s.to_field(solve_dense(s)).values
    assert np.ptp(y, axis=1).max() <= 1e-12
    c = reduce_tri_1d(8)
    np.testing.assert_allclose(y[:, 0], c.to_chain(solve_dense(c)), rtol=0, atol=1e-14)


def test_dirichlet_frozen_values():
    g = build_grid(8, 8, "triangular", "dirichlet")
    s = assemble_triangular(g)
    y = s.to_field(solve_dense(s))
    assert y(0, 0) == pytest.approx(0.006762454077357823, rel=1e-12)
    assert y(-1, 0) == pytest.approx(0.0005941201708114657, rel=1e-10)
    assert y(1, 0) == pytest.approx(-0.0024546608463918715, rel=1e-12)
