"""Analytic values for the structured strategies and their limits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy.optimize import bisect

from .combinatorics import GameParams, hypergeom_pj


@dataclass(frozen=True)
class AsymptoticConstants:
    """Limiting constants of the random, harmonic and large-d analyses.

    Attributes:
        montanaro_bound: ``64 / (9 pi^2)``, lower bound on ``alpha_d`` for all d.
        harmonic_limit: ``3/4 + 3/pi^2``, large-n ratio of the d = 2 harmonic strategy.
        large_d_ratio_bound: ``2 (8 / (3 pi))^4``, large-d lower bound on the random-frame ratio.
        alpha_2: exact alignment parameter ``5/6`` in dimension 2.
    """

    montanaro_bound: float = 64 / (9 * math.pi**2)
    harmonic_limit: float = 0.75 + 3 / math.pi**2
    large_d_ratio_bound: float = 2 * (8 / (3 * math.pi)) ** 4
    alpha_2: Fraction = Fraction(5, 6)


CONSTANTS = AsymptoticConstants()


def t_n(n: int, method: str = "closed") -> float:
    """Weighted cosine sum ``T_n = sum_{D=1}^{n-2} (n-1-D) cos(pi D / n)``.

    ``method="closed"`` uses ``1 / (2 sin^2(pi / (2n))) - n/2``.
    """
    if n < 3:
        raise ValueError(f"T_n needs n >= 3, got {n}")
    if method == "sum":
        return math.fsum((n - 1 - k) * math.cos(math.pi * k / n) for k in range(1, n - 1))
    if method == "closed":
        return 1 / (2 * math.sin(math.pi / (2 * n)) ** 2) - n / 2
    raise ValueError(f"method must be 'sum' or 'closed', got {method!r}")


def harmonic_d2_value(n: int) -> float:
    """Winning probability ``1/(n-1) + 2 T_n / (n (n-1)^2)`` of the d = 2 harmonic strategy."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    return 1 / (n - 1) + 2 * t_n(n) / (n * (n - 1) ** 2)


def harmonic_d2_advantage_threshold(n: int) -> float:
    """``(n-1)(n-2)/6``: the d = 2 harmonic strategy beats classical iff ``T_n`` exceeds it."""
    return (n - 1) * (n - 2) / 6


def cross_overlap_d2(n: int, m1: int, m2: int) -> float:
    """``|<v_X^0|v_Y^0>|^2 = cos^2(pi |m2 - m1| / (2n))`` for ``X = {0, m1}``, ``Y = {0, m2}``."""
    for m in (m1, m2):
        if not 1 <= m <= n - 1:
            raise ValueError(f"partner channels must lie in [1, {n - 1}], got {m}")
    return math.cos(math.pi * abs(m2 - m1) / (2 * n)) ** 2


def lowdin_d2_coefficients(r: float) -> tuple[float, float]:
    """Coefficients ``(A, B)`` with ``v_0 = A phi_0 + B e^{i arg} phi_1`` for overlap magnitude ``r < 1``."""
    if not 0 <= r < 1:
        raise ValueError(f"overlap magnitude must lie in [0, 1), got {r}")
    a, b = (1 + r) ** -0.5, (1 - r) ** -0.5
    return (a + b) / 2, (a - b) / 2


def simplex_mu(d: float) -> float:
    """Same-channel Löwdin overlap between two safe sets of the simplex frame."""
    if d < 2:
        raise ValueError(f"simplex needs d >= 2, got {d}")
    return (d**3 - 3 * d - 2 + 2 * (d + 1) ** 1.5) / (d * d * (d + 1))


def simplex_value(d: int) -> tuple[float, float]:
    """``(mu, omega)`` for the simplex frame in the ``(d+1, 1)`` game."""
    mu = simplex_mu(d)
    return mu, (1 + (d - 1) * mu * mu) / (d + 1)


def simplex_margin(d: float) -> float:
    """``(d+1) mu^2 - d``; positive exactly when the simplex beats classical."""
    mu = simplex_mu(d)
    return (d + 1) * mu * mu - d


def simplex_crossover(xtol: float = 1e-6) -> float:
    """Real root of :func:`simplex_margin` in ``[5, 6]``."""
    return bisect(simplex_margin, 5.0, 6.0, xtol=xtol)


def simplex_lowdin_coefficients(d: int) -> tuple[float, float]:
    """``(alpha, gamma)`` with ``v_c = alpha s_c - gamma s_a`` when ``a`` is the missing channel."""
    return math.sqrt(d / (d + 1)), (math.sqrt(d + 1) - 1) / math.sqrt(d * (d + 1))


def simplex_gram_inv_sqrt(d: int) -> np.ndarray:
    """Closed-form ``G^(-1/2)`` of any d-subset of the simplex frame."""
    a = math.sqrt(d / (d + 1))
    return a * np.eye(d) + (math.sqrt(d) - a) / d * np.ones((d, d))


def random_frame_formulas(d: int, alpha: float) -> tuple[float, float]:
    """``L1 = alpha^2 + (1 - alpha)^2 / (d - 1)`` and the fixed-d ratio ``(2d - 1) L1 / d``."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    L1 = alpha**2 + (1 - alpha) ** 2 / (d - 1)
    return L1, (2 * d - 1) * L1 / d


def decomposed_value(params: GameParams, overlaps: Mapping[int, float]) -> float:
    """``(d/n) sum_j p(j) L_j`` from per-intersection-size overlaps.

    ``overlaps`` may omit ``j = d`` (taken as 1) and sizes of zero weight.
    """
    d, n = params.d, params.n
    total = []
    for j in range(1, d + 1):
        p = hypergeom_pj(params, j)
        if p == 0:
            continue
        L = 1.0 if j == d and j not in overlaps else overlaps[j]
        total.append(float(p) * L)
    return d / n * math.fsum(total)


def expected_random_value_exact(params: GameParams, L1: Fraction) -> Fraction:
    """Exact ``(d/n)(p(1) L1 + p(2))`` for d = 2 games, where only j = 1, 2 occur."""
    if params.d != 2:
        raise ValueError("exact expression only covers d = 2")
    return Fraction(params.d, params.n) * (hypergeom_pj(params, 1) * L1 + hypergeom_pj(params, 2))


def finite_n_bound(params: GameParams, L1: float) -> float:
    """Lower bound ``(d/n) p(1) L1`` on the expected random-frame value."""
    return params.d / params.n * float(hypergeom_pj(params, 1)) * L1


def harmonic_asymptotic_ratio() -> float:
    return CONSTANTS.harmonic_limit
