"""Separation-of-variables solution of the square model under Dirichlet conditions.

Each odd sine mode ``sin(k pi (n + N) / 2N)`` has a continuum profile
``a_k sinh((M + m) alpha_k)`` for ``m <= -1`` and an atomistic profile
``b_k (-1)^m F_m + c_k f_m`` for ``m >= 0``, where ``F_m = F_m(gamma, delta)``
and ``f_m = F_m(delta, gamma)`` vanish at ``m = M, M + 1``.

Numerical scheme.  The pair ``(Phi_m, f_m) = ((-1)^m F_m, f_m)`` is replaced by
``(Phi_m, g_m)`` with ``g_m = f_m + kappa Phi_m``, ``kappa = sinh delta /
(e^gamma + cosh delta)``; this cancels the ``e^{(M-m) gamma}`` growth that
``f_m`` inherits through its alternating term.  Every 2x2 determinant of the
form ``Phi_i f_j - Phi_j f_i`` is unchanged by the substitution.  ``Phi`` is
then scaled by ``e^{-M gamma}`` and ``g`` by ``e^{-M delta}``, so all
quantities stay O(1) for any M and the common scale cancels in each ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .lattice import BC, GridSpec, Model, ScalarField
from .scaled import ScaledReal


@dataclass(frozen=True)
class SpectralMode:
    """Per-mode quantities; ``a``, ``b``, ``c`` stay None until solved.

    ``b`` and ``c`` are the coefficients of ``(-1)^m F_m`` and ``f_m``;
    ``b_g`` is the coefficient of ``(-1)^m F_m`` in the pair ``(Phi, g)``, so
    ``b = b_g + kappa c``.  The profile is evaluated from ``b_g`` because ``b``
    nearly cancels against ``kappa c``.
    """

    k: int
    M: int
    N: int
    lam: float
    alpha: float
    gamma: float
    delta: float
    rho: float
    ell: float
    a: ScaledReal | None = None
    b: ScaledReal | None = None
    c: ScaledReal | None = None
    b_g: ScaledReal | None = None

    @property
    def odd(self) -> bool:
        return self.k % 2 == 1

    @property
    def kappa(self) -> float:
        return math.sinh(self.delta) / (math.exp(self.gamma) + math.cosh(self.delta))

    @property
    def denom(self) -> float:
        """``cosh gamma + cosh delta``."""
        return math.cosh(self.gamma) + math.cosh(self.delta)


def _acosh1p(t: float) -> float:
    """``arccosh(1 + t)`` accurate for small ``t >= 0``."""
    return math.log1p(t + math.sqrt(t * (t + 2.0)))


def _sinh_ratio(num: float, den: float, alpha: float) -> float:
    """``sinh(num * alpha) / sinh(den * alpha)`` without overflow (den > 0)."""
    if num == 0:
        return 0.0
    return math.exp((num - den) * alpha) * (math.expm1(-2.0 * num * alpha) / math.expm1(-2.0 * den * alpha))


def _check_grid(grid: GridSpec) -> None:
    if grid.model is not Model.SQUARE or grid.bc is not BC.DIRICHLET:
        raise ValueError("the series solution exists for the square model with Dirichlet conditions")


def mode_params(k: int, grid: GridSpec) -> SpectralMode:
    N, M = grid.N, grid.M
    if not 1 <= k <= 2 * N - 1:
        raise ValueError(f"k must lie in [1, {2 * N - 1}], got {k}")
    theta = k * math.pi / (4 * N)
    lam = 2.0 * math.sin(theta) ** 2
    root = math.sqrt(25.0 + 8.0 * lam)
    alpha = _acosh1p(lam / 5.0)
    # cosh(delta) - 1 = 2 lam / (root + 5), cosh(gamma) = cosh(delta) + 1/2
    t_delta = 2.0 * lam / (root + 5.0)
    delta = _acosh1p(t_delta)
    gamma = _acosh1p(t_delta + 0.5)
    # t = sinh((M-1) alpha) / sinh(M alpha)
    t = _sinh_ratio(M - 1, M, alpha)
    rho = t / (5.0 + t)
    ell = -(2.0 * grid.eps / N) / math.tan(theta) if k % 2 else 0.0
    return SpectralMode(k=k, M=M, N=N, lam=lam, alpha=alpha, gamma=gamma, delta=delta, rho=rho, ell=ell)


def F_of_m(m: int, gamma: float, delta: float, M: int) -> ScaledReal:
    """``F_m(gamma, delta)`` in log-scaled form; ``f_m(gamma, delta) = F_of_m(m, delta, gamma, M)``."""
    if not -M <= m <= M + 1:
        raise ValueError(f"m must lie in [{-M}, {M + 1}], got {m}")
    s = 1 if m % 2 == 0 else -1
    num = (ScaledReal.sinh((M + 1 - m) * gamma)
           + ScaledReal.sinh((M - m) * gamma) * math.cosh(delta)
           - ScaledReal.cosh((M - m) * delta) * (s * math.sinh(gamma)))
    return num / (math.cosh(gamma) + math.cosh(delta))


def scaled_basis(mode: SpectralMode, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(Phi_m e^{-M gamma}, g_m e^{-M delta})`` for ``-2 <= m <= M + 1``."""
    m = np.asarray(m, dtype=float)
    M, g, d = mode.M, mode.gamma, mode.delta
    s = np.where(np.asarray(m, dtype=np.int64) % 2 == 0, 1.0, -1.0)
    D = mode.denom
    kap = mode.kappa
    sinh_Xg = 0.5 * (np.exp((1 - m) * g) - np.exp(-(2 * M + 1 - m) * g))
    sinh_X = 0.5 * (np.exp(-m * g) - np.exp(-(2 * M - m) * g))
    cosh_Y_g = 0.5 * (np.exp((M - m) * d - M * g) + np.exp(-(M - m) * d - M * g))
    phi = (s * (sinh_Xg + sinh_X * math.cosh(d)) - cosh_Y_g * math.sinh(g)) / D

    sinh_Yd = 0.5 * (np.exp((1 - m) * d) - np.exp(-(2 * M + 1 - m) * d))
    sinh_Y = 0.5 * (np.exp(-m * d) - np.exp(-(2 * M - m) * d))
    cosh_Y = 0.5 * (np.exp(-m * d) + np.exp(-(2 * M - m) * d))
    gm = ((sinh_Yd + sinh_Y * math.cosh(g) - kap * math.sinh(g) * cosh_Y) / D
          - s * kap * np.exp(-(M - m) * g - M * d))
    return phi, gm


class _Pairs:
    """Scaled determinants ``Phi_i f_j - Phi_j f_i`` (times ``e^{-M(gamma+delta)}``)."""

    def __init__(self, mode: SpectralMode, extra: np.ndarray | None = None):
        base = np.arange(-2, 2)
        self.phi_b, self.g_b = scaled_basis(mode, base)
        if extra is not None:
            self.phi_x, self.g_x = scaled_basis(mode, extra)

    def __call__(self, i: int, j: int) -> float:
        return self.phi_b[i + 2] * self.g_b[j + 2] - self.phi_b[j + 2] * self.g_b[i + 2]

    def with_row(self, j: int) -> np.ndarray:
        return self.phi_x * self.g_b[j + 2] - self.phi_b[j + 2] * self.g_x


def determinant(mode: SpectralMode, pairs: _Pairs | None = None) -> float:
    """``P r - R p`` through its six-determinant expansion, times ``e^{-M(gamma+delta)}``."""
    D = pairs or _Pairs(mode)
    rho = mode.rho
    return (6 * (8 * rho - 1) * D(0, -1) + (25 * rho - 3) * D(1, 0) - D(1, -2)
            + (2 - rho) * D(-1, -2) + (5 * rho - 1) * D(1, -1) - 5 * rho * D(0, -2))


def q_continuum(mode: SpectralMode, pairs: _Pairs | None = None) -> float:
    """Continuum numerator ``Q_k`` times ``e^{-M(gamma+delta)}``."""
    D = pairs or _Pairs(mode)
    return 12 * D(0, -1) + 5 * (D(0, -2) - D(0, 1)) + D(-1, -2) - D(-1, 1)


def q_atomistic(mode: SpectralMode, m: np.ndarray, pairs: _Pairs | None = None) -> np.ndarray:
    """Atomistic numerators ``Q_{m,k}`` times ``e^{-M(gamma+delta)}``."""
    D = pairs if pairs is not None else _Pairs(mode, np.asarray(m))
    rho = mode.rho
    return (3 * (1 - 10 * rho) * D.with_row(0) + 3 * (1 - 2 * rho) * D.with_row(-1)
            + D.with_row(-2) - D.with_row(1))


def pr_combinations(mode: SpectralMode) -> dict[str, float]:
    """Scaled ``P, R`` (on Phi) and ``p, r`` (on g) from the interface and boundary equations."""
    phi, g = scaled_basis(mode, np.arange(-2, 2))
    rho = mode.rho

    def P_of(v):
        return 2 * v[1] - v[3] - rho * (v[1] + 5 * v[2])

    def R_of(v):
        return 3 * v[2] - 9 * v[1] + v[0] + 5 * v[3]

    return {"P": P_of(phi), "R": R_of(phi), "p": P_of(g), "r": R_of(g)}


def _log_abs_sinh(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x - math.log(2.0) + np.log(-np.expm1(-2.0 * x))


def solve_coefficients(mode: SpectralMode) -> SpectralMode:
    """Fill ``a``, ``b``, ``c`` in log-scaled form."""
    if not mode.odd:
        z = ScaledReal.zero()
        return replace(mode, a=z, b=z, c=z, b_g=z)
    pr = pr_combinations(mode)
    det = pr["P"] * pr["r"] - pr["p"] * pr["R"]
    if det == 0.0 or not math.isfinite(det):
        raise ArithmeticError(f"vanishing determinant for k={mode.k}, M={mode.M}, N={mode.N}")
    beta = (pr["r"] + 6 * pr["p"]) * mode.ell / det
    chi = -(pr["R"] + 6 * pr["P"]) * mode.ell / det
    M = mode.M
    # y = beta*Phi~ + chi*g~, Phi = Phi~ e^{M gamma}, g = g~ e^{M delta} = f + kappa Phi
    c = ScaledReal.from_float(chi) * ScaledReal.exp(-M * mode.delta)
    b_g = ScaledReal.from_float(beta) * ScaledReal.exp(-M * mode.gamma)
    b = b_g + c * mode.kappa
    phi, g = scaled_basis(mode, np.array([-1, 0]))
    y_m1, y_0 = beta * phi + chi * g
    S = 5 * ScaledReal.sinh(M * mode.alpha) + ScaledReal.sinh((M - 1) * mode.alpha)
    a = ScaledReal.from_float(5 * y_0 + y_m1) / S
    return replace(mode, a=a, b=b, c=c, b_g=b_g)


def mode_profile(mode: SpectralMode) -> np.ndarray:
    """Mode amplitude for ``m = -M..M`` via the determinant representation."""
    M = mode.M
    out = np.zeros(2 * M + 1)
    if not mode.odd:
        return out
    m_at = np.arange(0, M + 1)
    pairs = _Pairs(mode, m_at)
    det = determinant(mode, pairs)
    scale = mode.ell / det
    out[M:] = q_atomistic(mode, m_at, pairs) * scale
    m_cb = np.arange(-M, 0)
    # sinh((M+m) alpha) / sinh((M-1) alpha) computed as a bounded ratio
    lead = np.exp((m_cb + 1) * mode.alpha)
    ratio = lead * np.expm1(-2.0 * (M + m_cb) * mode.alpha) / math.expm1(-2.0 * (M - 1) * mode.alpha)
    out[:M] = q_continuum(mode, pairs) * scale * mode.rho * ratio
    return out


def mode_profile_via_coefficients(mode: SpectralMode) -> np.ndarray:
    """Mode amplitude evaluated from ``a``, ``b``, ``c``."""
    M = mode.M
    out = np.zeros(2 * M + 1)
    if not mode.odd:
        return out
    if mode.a is None:
        mode = solve_coefficients(mode)
    m_at = np.arange(0, M + 1)
    phi, g = scaled_basis(mode, m_at)
    beta = float(mode.b_g * ScaledReal.exp(M * mode.gamma))
    chi = float(mode.c * ScaledReal.exp(M * mode.delta))
    out[M:] = beta * phi + chi * g
    m_cb = np.arange(-M + 1, 0)
    a = mode.a
    if a.sign != 0:
        out[1:M] = a.sign * np.exp(a.log_magnitude + _log_abs_sinh((M + m_cb) * mode.alpha))
    return out


@dataclass(frozen=True)
class SeriesSolution:
    grid: GridSpec
    modes: list[SpectralMode]
    values: ScalarField


def _assemble(grid: GridSpec, modes: list[SpectralMode], profile) -> ScalarField:
    M, N = grid.M, grid.N
    odd = [md for md in modes if md.odd]
    P = np.column_stack([profile(md) for md in odd])
    k = np.array([md.k for md in odd], dtype=float)
    n = np.arange(0, N + 1)
    S = np.sin(np.outer(k, n + N) * (math.pi / (2 * N)))
    S[:, -1] = 0.0  # n = N: sin(k pi) vanishes
    half = P @ S
    values = np.empty((2 * M + 1, 2 * N + 1))
    values[:, N:] = half
    values[:, :N] = half[:, :0:-1]  # y(m, -n) = y(m, n)
    return ScalarField(grid, values)


def eval_solution(grid: GridSpec) -> SeriesSolution:
    """Series solution through the determinant representation."""
    _check_grid(grid)
    modes = [solve_coefficients(mode_params(k, grid)) for k in range(1, 2 * grid.N)]
    return SeriesSolution(grid, modes, _assemble(grid, modes, mode_profile))


def eval_solution_via_coefficients(grid: GridSpec) -> SeriesSolution:
    """Series solution through the mode coefficients ``a_k, b_k, c_k``."""
    _check_grid(grid)
    modes = [solve_coefficients(mode_params(k, grid)) for k in range(1, 2 * grid.N)]
    return SeriesSolution(grid, modes, _assemble(grid, modes, mode_profile_via_coefficients))
