"""Numeric checks of the spectral inequalities and pointwise decay of the square solution.

Each check is evaluated at a concrete ``(k, M, N)`` and returned as a
``BoundReport``.  Inequalities are compared exactly (zero tolerance); the one
identity that is an equality, ``sinh(alpha/2) = sqrt(lam/10)``, is compared
with an absolute tolerance of 1e-13.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .analytic import SpectralMode, determinant, mode_params
from .lattice import BC, GridSpec, Model, ScalarField, forward_difference

EQUALITY_TOL = 1e-13
EXPANSION_RTOL = 1e-9
LEAD_CONSTANT = 100.0
GOLDEN_DECAY = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class BoundReport:
    """``lhs <= rhs`` (or ``lhs < rhs`` when ``strict``) at one parameter point."""

    name: str
    k: int
    M: int
    N: int
    lhs: float
    rhs: float
    satisfied: bool
    slack: float
    strict: bool = False


def _report(name: str, k: int, M: int, N: int, lhs: float, rhs: float, strict: bool = False) -> BoundReport:
    ok = lhs < rhs if strict else lhs <= rhs
    return BoundReport(name, k, M, N, float(lhs), float(rhs), bool(ok), float(rhs - lhs), strict)


def _mode(k: int, M: int, N: int) -> SpectralMode:
    # the spectral quantities need only (k, M, N); parity of M is irrelevant here
    grid = GridSpec(M=M, N=N, eps=1.0 / (2 * M), model=Model.SQUARE, bc=BC.DIRICHLET)
    return mode_params(k, grid)


def check_elementary(k: int, N: int) -> list[BoundReport]:
    md = _mode(k, max(N, 2), N)
    lam, a, g, d = md.lam, md.alpha, md.gamma, md.delta
    cg = math.cosh(g)
    return [
        _report("gamma_lower", k, 0, N, lam / 6.0, cg - 1.5),
        _report("gamma_upper", k, 0, N, cg - 1.5, lam / 5.0),
        _report("sinh_delta_lower", k, 0, N, math.sqrt(lam / 3.0), math.sinh(d)),
        _report("sinh_alpha_lower", k, 0, N, math.sqrt(2.0 * lam / 5.0), math.sinh(a)),
        _report("sinh_half_alpha_identity", k, 0, N,
                abs(math.sinh(a / 2.0) - math.sqrt(lam / 10.0)), EQUALITY_TOL),
        _report("exp_alpha_decay", k, 0, N, math.exp(-a), math.exp(-k / (2.0 * math.sqrt(5.0) * N))),
        _report("exp_gamma_decay", k, 0, N, math.exp(-g), GOLDEN_DECAY),
        _report("exp_delta_decay", k, 0, N, math.exp(-d), math.exp(-k / (5.0 * N))),
    ]


def one_minus_six_rho(md: SpectralMode) -> float:
    """``1 - 6 rho = 5 (1 - t) / (5 + t)`` with ``t = sinh((M-1) alpha) / sinh(M alpha)``."""
    t = 5.0 * md.rho / (1.0 - md.rho)
    return 5.0 * (1.0 - t) / (5.0 + t)


def check_rho(k: int, M: int, N: int) -> list[BoundReport]:
    if M < 2:
        raise ValueError(f"M must be at least 2, got {M}")
    md = _mode(k, M, N)
    gap = one_minus_six_rho(md)
    bound = (5.0 / 6.0) * (md.lam / 5.0 + 1.0 / (M - 1) + math.sinh(md.alpha))
    return [
        _report("rho_gap_positive", k, M, N, 0.0, gap, strict=True),
        _report("rho_gap_upper", k, M, N, gap, bound),
        _report("rho_positive", k, M, N, 0.0, md.rho, strict=True),
        _report("rho_upper", k, M, N, md.rho, 1.0 / 6.0),
    ]


@dataclass(frozen=True)
class DetExpansion:
    """Coefficients of the determinant expansion and the leading-order terms.

    ``A..D`` are the hyperbolic-expansion coefficients of
    ``(cosh gamma + cosh delta)(P r - R p)``.  ``B_printed``/``C_printed`` keep
    the closed forms with the alternative constants 229/4 and 14 for comparison.
    """

    A: float
    B: float
    C: float
    D: float
    B_printed: float
    C_printed: float
    Q0: float
    Q1: float
    Q_1: float
    Q_2: float
    Q_3: float
    Q_4: float


def abcd_coefficients(md: SpectralMode, printed: bool = False) -> tuple[float, float, float, float]:
    lam, rho = md.lam, md.rho
    root = math.sqrt(25.0 + 8.0 * lam)
    sg, sd = math.sinh(md.gamma), math.sinh(md.delta)
    # printed constants 229/4 and 14 differ from the symbolic expansion (219/4, 27/2)
    c_rho, c_0 = (229.0 / 4.0, 14.0) if printed else (219.0 / 4.0, 13.5)
    A = (4 * lam**2 + 313.0 / 2 * lam + 315.0) * rho - 6 * lam**2 - 39 * lam - 105.0 / 2
    B = ((18 * lam + 225.0 / 4 + (c_rho + 2 * lam) * root) * rho
         + (25.0 / 2 + 4 * lam - (c_0 + 4 * lam) * root)) * sg
    C = ((-18 * lam - 225.0 / 4 + (c_rho + 2 * lam) * root) * rho
         + (-25.0 / 2 - 4 * lam - (c_0 + 4 * lam) * root)) * sd
    D = ((169.0 + 8 * lam) * rho - (74.0 + 20 * lam)) * sg * sd
    return A, B, C, D


def expansion_value(md: SpectralMode, coeffs=None) -> float:
    """``(cosh gamma + cosh delta)(P r - R p) e^{-M(gamma+delta)}`` from ``A..D``."""
    A, B, C, D = coeffs or abcd_coefficients(md)
    M, g, d = md.M, md.gamma, md.delta
    shg, chg = -math.expm1(-2 * M * g) / 2, (1 + math.exp(-2 * M * g)) / 2
    shd, chd = -math.expm1(-2 * M * d) / 2, (1 + math.exp(-2 * M * d)) / 2
    rest = 2 * (12 + 2 * md.lam - 72 * md.rho) * math.sinh(g) * math.sinh(d) * math.exp(-M * (g + d))
    return A * shg * shd + B * chg * shd + C * shg * chd + D * chg * chd + rest


def _leading(md: SpectralMode) -> tuple[float, ...]:
    e = math.exp
    g, d, rho = md.gamma, md.delta, md.rho
    Q0 = 0.25 * (e(g) + e(d)) * (12 * (e(g) + e(d)) + 5 * (e(2 * d) - e(2 * g)) - 5 * (e(-g) + e(-d))
                                 - e(g + d) * (e(g) + e(d)) + e(g - d) - e(d - g))
    Q1 = 0.25 * (e(g) + e(-d)) * (-12 * (e(g) + e(-d)) + 5 * (e(2 * g) - e(-2 * d)) + 5 * (e(-g) + e(d))
                                  + e(g - d) * (e(g) + e(-d)) + e(-g - d) - e(g + d))
    q1 = 3 * (1 + e(d)) + e(2 * d) - e(-d) - 6 * rho * (5 + e(d))
    q2 = e(2 * g) + e(-g) - 3 * (e(g) - 1) + 6 * rho * (e(g) - 5)
    q3 = 3 * (1 - 2 * rho) * (e(-d) - 1) + e(-2 * d) - e(d) + 6 * (1 - 6 * rho)
    return Q0, Q1, q1, q2, q3, -q2


def det_expansion(md: SpectralMode) -> tuple[DetExpansion, list[BoundReport]]:
    if not md.odd:
        raise ValueError("det_expansion is defined for odd k")
    k, M, N = md.k, md.M, md.N
    A, B, C, D = abcd_coefficients(md)
    _, Bp, Cp, _ = abcd_coefficients(md, printed=True)
    exp_ = DetExpansion(A, B, C, D, Bp, Cp, *_leading(md))

    direct = md.denom * determinant(md)
    expanded = expansion_value(md, (A, B, C, D))
    low = (5.0 / 24.0) * (-math.expm1(-2.0 * M / (5.0 * N)))
    reports = [
        _report("A_negative", k, M, N, A, 0.0, strict=True),
        _report("B_negative", k, M, N, B, 0.0, strict=True),
        _report("C_negative", k, M, N, C, 0.0, strict=True),
        _report("D_negative", k, M, N, D, 0.0, strict=True),
        _report("B_lower", k, M, N, 5.0 / 6.0, abs(B)),
        # both sides divided by exp(M (gamma + delta))
        _report("det_lower", k, M, N, low, abs(direct)),
        _report("det_expansion_match", k, M, N, abs(expanded - direct), EXPANSION_RTOL * abs(direct)),
    ]
    return exp_, reports


def direct_leading(md: SpectralMode, m: int | None = None) -> tuple[float, float]:
    """Coefficients of ``e^{M(gamma+delta)}`` and ``e^{M(gamma-delta)}`` in
    ``(cosh gamma + cosh delta) Q_k`` (``m=None``) or ``... Q_{m,k}``.

    Built from the hyperbolic expansion of each pair determinant, independently
    of the closed forms used by ``leading_terms``.
    """
    g, d = md.gamma, md.delta
    # pair (i, j): D * (Phi_i f_j - Phi_j f_i) = sum of A..D terms; leading parts
    # are (A+B+C+D)/4 and (-A-B+C+D)/4
    def pair(i, j):
        s = lambda t: -1.0 if t % 2 else 1.0
        ch, sh = math.cosh, math.sinh
        A = (s(i) * ch(i * g) * ch((j - 1) * d) + s(i) * ch(j * d) * ch((i - 1) * g)
             - s(j) * ch(j * g) * ch((i - 1) * d) - s(j) * ch(i * d) * ch((j - 1) * g))
        B = (-s(i) * sh(i * g) * ch((j - 1) * d) - s(i) * sh((i - 1) * g) * ch(j * d)
             + s(j) * sh(j * g) * ch((i - 1) * d) + s(j) * sh((j - 1) * g) * ch(i * d))
        C = (-s(i) * ch(i * g) * sh((j - 1) * d) - s(i) * ch((i - 1) * g) * sh(j * d)
             + s(j) * ch(j * g) * sh((i - 1) * d) + s(j) * ch((j - 1) * g) * sh(i * d))
        D = (s(i) * sh(i * g) * sh((j - 1) * d) + s(i) * sh((i - 1) * g) * sh(j * d)
             - s(j) * sh(j * g) * sh((i - 1) * d) - s(j) * sh((j - 1) * g) * sh(i * d))
        return (A + B + C + D) / 4.0, (-A - B + C + D) / 4.0

    rho = md.rho
    if m is None:
        combo = [(12, 0, -1), (5, 0, -2), (-5, 0, 1), (1, -1, -2), (-1, -1, 1)]
    else:
        combo = [(3 * (1 - 10 * rho), m, 0), (3 * (1 - 2 * rho), m, -1), (1, m, -2), (-1, m, 1)]
    q0 = q1 = 0.0
    for c, i, j in combo:
        a, b = pair(i, j)
        q0 += c * a
        q1 += c * b
    return q0, q1


def leading_terms(md: SpectralMode) -> list[BoundReport]:
    """Ratios of the leading-order numerators to their claimed scales.

    ``lead1_ratio = (|Q^0| + |Q^1|) / sqrt(lam)`` and
    ``lead2_ratio = (|Q_1| + ... + |Q_4|) / (sqrt(lam) + 1/(M-1))``, each
    compared against ``LEAD_CONSTANT``.
    """
    if not md.odd:
        raise ValueError("leading_terms is defined for odd k")
    Q0, Q1, q1, q2, q3, q4 = _leading(md)
    s = math.sqrt(md.lam)
    r1 = (abs(Q0) + abs(Q1)) / s
    r2 = (abs(q1) + abs(q2) + abs(q3) + abs(q4)) / (s + 1.0 / (md.M - 1))
    return [
        _report("lead1_ratio", md.k, md.M, md.N, r1, LEAD_CONSTANT),
        _report("lead2_ratio", md.k, md.M, md.N, r2, LEAD_CONSTANT),
        _report("Q4_equals_minus_Q2", md.k, md.M, md.N, abs(q4 + q2), 0.0),
    ]


def trig_identity(rho: float, x: float, N: int) -> tuple[float, float]:
    """Both sides of the closed form for ``sum_{k=1}^N rho^{2k-1} sin((2k-1) x)``."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    j = 2 * np.arange(1, N + 1) - 1
    lhs = float(np.sum(rho ** j * np.sin(j * x)))
    num = ((rho + rho**3) * math.sin(x) - rho ** (2 * N + 1) * math.sin((2 * N + 1) * x)
           + rho ** (2 * N + 3) * math.sin((2 * N - 1) * x))
    rhs = num / (1.0 - 2.0 * rho**2 * math.cos(2.0 * x) + rho**4)
    return lhs, rhs


class DecayConstants(NamedTuple):
    """Smallest constants making the pointwise bounds hold on a computed field."""

    continuum: float
    atomistic: float
    small_left: float
    small_right: float


def check_pointwise_decay(y: ScalarField, grid: GridSpec) -> DecayConstants:
    """Fit the gradient decay constants (both directions) and the solution-size constants."""
    M, N, eps = grid.M, grid.N, grid.eps
    m = grid.m_values.astype(float)
    grads = [forward_difference(y, (1, 0)).values, forward_difference(y, (0, 1)).values]
    with np.errstate(invalid="ignore"):
        dy = np.fmax(np.abs(grads[0]), np.abs(grads[1]))
    dy = np.where(np.isnan(dy), 0.0, dy).max(axis=1)
    ymax = np.abs(y.values).max(axis=1)

    left = m <= -1
    right = m >= 0
    c_cont = float(np.max(dy[left] * m[left] ** 2 * np.exp(np.abs(m[left]) / (6 * math.sqrt(5) * N))))
    mr = m[right]
    at_bound = GOLDEN_DECAY**mr + np.exp(-2 * mr / (15 * N)) / (mr**2 + 1)
    c_at = float(np.max(dy[right] / at_bound))
    c_left = float(np.max(ymax[left] * np.abs(m[left]) / eps))
    c_right = float(np.max(ymax[right] / (eps * (GOLDEN_DECAY**mr + 1.0 / (mr + 1)))))
    return DecayConstants(c_cont, c_at, c_left, c_right)


def bound_sweep(N_values: Iterable[int], M_factors: Iterable[int] = (1, 2)) -> list[BoundReport]:
    """All spectral checks over ``k = 1..2N-1`` ordered by (N, M, k)."""
    out: list[BoundReport] = []
    factors = tuple(M_factors)
    for N in N_values:
        for f in factors:
            M = f * N
            for k in range(1, 2 * N):
                if f == factors[0]:
                    out.extend(check_elementary(k, N))
                out.extend(check_rho(k, M, N))
                md = _mode(k, M, N)
                if md.odd:
                    out.extend(det_expansion(md)[1])
                    out.extend(leading_terms(md))
    return out


def reports_to_csv(reports: Iterable[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "k", "M", "N", "lhs", "rhs", "slack", "satisfied"])
    for r in reports:
        w.writerow([r.name, r.k, r.M, r.N, f"{r.lhs:.17g}", f"{r.rhs:.17g}", f"{r.slack:.17g}",
                    "true" if r.satisfied else "false"])
    return buf.getvalue()
