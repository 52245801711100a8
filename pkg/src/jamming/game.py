"""Quantum winning probabilities of seed-frame strategies.

With a shared maximally entangled state in ``C^d`` and Löwdin measurement
vectors on both sides, outcome pair ``(a, b)`` on inputs ``(x, y)`` occurs
with probability ``|<v_x^a|v_y^b>|^2 / d``. Averaging the diagonal wins over
uniform inputs gives

    omega_q = 1/(d |S|^2) sum_c ||A_c||_F^2,   A_c = sum_{x contains c} |v_x^c><v_x^c|.

:func:`quantum_value` evaluates that trace form; :func:`quantum_value_direct`
sums the win probabilities over input pairs and serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .combinatorics import GameParams, SafeSet, classical_value, hypergeom_pj
from .frames import Frame
from .linalg import DEFAULT_RANK_TOL
from .measurement import MeasurementBasis, lowdin_tables


@dataclass(frozen=True)
class GameValue:
    omega: float
    params: GameParams
    method: str
    frame_label: str

    def __float__(self):
        return self.omega

    def to_record(self) -> dict:
        """JSON-ready ``{n, k, d, frame, omega_q, omega_c, ratio, method}``."""
        omega_c = float(classical_value(self.params))
        return {
            **self.params.as_dict(),
            "frame": self.frame_label,
            "omega_q": self.omega,
            "omega_c": omega_c,
            "ratio": self.omega / omega_c,
            "method": self.method,
        }


def channel_operators(vecs: np.ndarray, sets: np.ndarray, n: int) -> np.ndarray:
    """``A_c = sum_{x contains c} |v_x^c><v_x^c|`` for every channel, shape ``(n, d, d)``."""
    d = vecs.shape[-1]
    A = np.zeros((n, d, d), dtype=complex)
    for k in range(sets.shape[1]):
        v = vecs[:, k, :]
        np.add.at(A, sets[:, k], v[:, :, None] * v.conj()[:, None, :])
    return A


def omega_from_vectors(vecs: np.ndarray, sets: np.ndarray, n: int) -> float:
    """Trace-form value for arbitrary per-safe-set measurement vectors.

    Args:
        vecs: ``(m, d, d)``; ``vecs[i, k]`` is the vector for channel ``sets[i, k]``.
        sets: ``(m, d)`` safe sets.
        n: Number of channels.
    """
    m, d = sets.shape
    A = channel_operators(vecs, sets, n)
    per_channel = np.sum(np.abs(A) ** 2, axis=(1, 2))
    return math.fsum(per_channel) / (d * m * m)


def omega_batch(vecs: np.ndarray, sets: np.ndarray, n: int) -> np.ndarray:
    """:func:`omega_from_vectors` over a leading batch axis of ``vecs``, shape ``(B, m, d, d)``."""
    m, d = sets.shape
    incidence = np.zeros((n, m, d))
    incidence[sets, np.arange(m)[:, None], np.arange(d)[None, :]] = 1.0
    outer = vecs[..., :, None] * vecs.conj()[..., None, :]
    A = np.einsum("cik,bikpq->bcpq", incidence, outer)
    return np.sum(np.abs(A) ** 2, axis=(1, 2, 3)) / (d * m * m)


def quantum_value(frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL) -> GameValue:
    """Winning probability of the Löwdin strategy built from ``frame``."""
    sets, vecs, _ = lowdin_tables(frame, params, rank_tol)
    return GameValue(omega_from_vectors(vecs, sets, params.n), params, "trace", frame.label)


def quantum_value_direct(
    frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL, block: int = 64
) -> GameValue:
    """Same value summed pair by pair: ``1/|S|^2 sum_{x,y} sum_{c in x & y} P(c, c | x, y)``."""
    sets, vecs, _ = lowdin_tables(frame, params, rank_tol)
    m, d = sets.shape
    row_sums = []
    for start in range(0, m, block):
        xs, vx = sets[start:start + block], vecs[start:start + block]
        # overlaps[i, j, a, b] = <v_{x_i}^a | v_{y_j}^b>
        overlaps = np.einsum("iak,jbk->ijab", vx.conj(), vecs)
        same = xs[:, None, :, None] == sets[None, :, None, :]
        probs = np.where(same, np.abs(overlaps) ** 2, 0.0) / d
        row_sums.extend(probs.sum(axis=(1, 2, 3)))
    return GameValue(math.fsum(row_sums) / (m * m), params, "direct", frame.label)


def joint_distribution(bases: dict[SafeSet, MeasurementBasis], x, y) -> np.ndarray:
    """``P[a, b] = |<v_x^a|v_y^b>|^2 / d`` indexed by position within ``x`` and ``y``."""
    bx, by = bases[tuple(x)], bases[tuple(y)]
    d = bx.vectors.shape[1]
    return np.abs(bx.vectors.conj() @ by.vectors.T) ** 2 / d


def joint_probability(bases: dict[SafeSet, MeasurementBasis], x, y, a: int, b: int) -> float:
    """Probability that Alice outputs ``a`` on ``x`` and Bob outputs ``b`` on ``y``."""
    x, y = tuple(x), tuple(y)
    if a not in x:
        raise ValueError(f"channel {a} is not in safe set {x}")
    if b not in y:
        raise ValueError(f"channel {b} is not in safe set {y}")
    return float(joint_distribution(bases, x, y)[x.index(a), y.index(b)])


@dataclass(frozen=True)
class IntersectionClass:
    j: int
    weight: float
    mean_overlap: float
    pair_count: int


@dataclass(frozen=True)
class DecompositionReport:
    """Per-intersection-size averages of same-channel overlaps."""

    params: GameParams
    per_j: list[IntersectionClass]
    reconstructed_omega: float
    frame_label: str = ""
    empirical_weights: list[float] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            **self.params.as_dict(),
            "frame": self.frame_label,
            "reconstructed_omega": self.reconstructed_omega,
            "per_j": [
                {"j": c.j, "weight": c.weight, "mean_overlap": c.mean_overlap, "pair_count": c.pair_count}
                for c in self.per_j
            ],
        }


def decompose_by_intersection(
    frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL
) -> DecompositionReport:
    """Split the trace-form sum by the size ``j`` of ``x & y``.

    For every channel ``c`` and ordered pair of safe sets through ``c`` the
    squared overlap ``|<v_x^c|v_y^c>|^2`` is binned by ``|x & y|``. The mean
    of each bin, weighted by the hypergeometric law of ``j``, rebuilds the
    value as ``(d/n) sum_j p(j) L_j``.
    """
    sets, vecs, _ = lowdin_tables(frame, params, rank_tol)
    n, d = params.n, params.d
    member = np.zeros((len(sets), n), dtype=np.int64)
    np.put_along_axis(member, sets, 1, axis=1)
    sums = [[] for _ in range(d + 1)]
    counts = np.zeros(d + 1, dtype=np.int64)
    for c in range(n):
        rows, pos = np.nonzero(sets == c)
        v = vecs[rows, pos]
        overlaps = np.abs(v.conj() @ v.T) ** 2
        inter = member[rows] @ member[rows].T
        counts += np.bincount(inter.ravel(), minlength=d + 1)
        binned = np.bincount(inter.ravel(), weights=overlaps.ravel(), minlength=d + 1)
        for j in range(1, d + 1):
            sums[j].append(binned[j])
    total = int(counts.sum())
    per_j, recon = [], []
    for j in range(1, d + 1):
        weight = hypergeom_pj(params, j)
        mean = math.fsum(sums[j]) / counts[j] if counts[j] else float("nan")
        per_j.append(IntersectionClass(j, float(weight), mean, int(counts[j])))
        if counts[j]:
            recon.append(float(weight) * mean)
    return DecompositionReport(
        params,
        per_j,
        d / n * math.fsum(recon),
        frame.label,
        [float(Fraction(int(counts[j]), total)) for j in range(1, d + 1)],
    )


def advantage_ratio(frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """``omega_q / omega_c``; above 1 means the frame beats every classical strategy."""
    return quantum_value(frame, params, rank_tol).omega / float(classical_value(params))
