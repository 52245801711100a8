"""Per-safe-set Gram matrices and Löwdin (pretty-good-measurement) bases.

For a safe set ``x`` with seed vectors ``phi_c`` the measurement vectors are
``v_c = sum_{c'} [(G^+)^(1/2)]_{c', c} phi_{c'}``. When ``G`` is positive
definite these form an orthonormal basis; otherwise they are the rank-one
elements of the pretty good measurement, and the remaining outcome (the
complement of their span) never wins, so it is only counted, not stored.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .combinatorics import GameParams, SafeSet, enumerate_safe_sets
from .frames import Frame
from .linalg import DEFAULT_RANK_TOL, inv_sqrt, inv_sqrt_batch


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Measurement vectors for one safe set.

    ``vectors[i]`` belongs to channel ``safe_set[i]``. ``completion_rank``
    is the dimension left uncovered by the vectors (0 when projective).
    """

    safe_set: SafeSet
    vectors: np.ndarray
    projective: bool
    completion_rank: int

    def vector(self, channel: int) -> np.ndarray:
        try:
            return self.vectors[self.safe_set.index(channel)]
        except ValueError:
            raise ValueError(f"channel {channel} is not in safe set {self.safe_set}") from None

    def as_dict(self) -> dict[int, np.ndarray]:
        return {c: self.vectors[i] for i, c in enumerate(self.safe_set)}

    def operator_sum(self) -> np.ndarray:
        """``sum_c |v_c><v_c|``."""
        return self.vectors.T @ self.vectors.conj()


def _check_safe_set(frame: Frame, x) -> SafeSet:
    x = tuple(int(c) for c in x)
    if len(x) != frame.d:
        raise ValueError(f"safe set {x} must have d={frame.d} channels")
    if list(x) != sorted(set(x)) or x[0] < 0 or x[-1] >= frame.n:
        raise ValueError(f"safe set {x} must be strictly increasing channels in [0, {frame.n})")
    return x


def gram_matrix(frame: Frame, x) -> np.ndarray:
    """``G[c, c'] = <phi_c|phi_c'>`` over ``x`` in ascending channel order."""
    x = _check_safe_set(frame, x)
    F = frame.vectors[list(x)]
    return F.conj() @ F.T


def lowdin_basis(
    frame: Frame, x, rank_tol: float = DEFAULT_RANK_TOL, method: str = "lapack"
) -> MeasurementBasis:
    """Löwdin (or, for rank-deficient seeds, PGM) vectors for safe set ``x``.

    Args:
        frame: Seed frame.
        x: Safe set, ascending channels.
        rank_tol: Relative eigenvalue cutoff for the pseudoinverse.
        method: Eigensolver passed to :func:`~jamming.linalg.inv_sqrt`.
    """
    x = _check_safe_set(frame, x)
    G = gram_matrix(frame, x)
    R = inv_sqrt(G, rank_tol=rank_tol, method=method)
    vecs = R.T @ frame.vectors[list(x)]
    w = np.linalg.eigvalsh(G)
    rank = int(np.sum(w > rank_tol * w[-1]))
    return MeasurementBasis(x, vecs, rank == frame.d, frame.d - rank)


def lowdin_batch(
    seeds: np.ndarray, sets: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Löwdin vectors for many safe sets at once.

    Args:
        seeds: ``(n, d)`` seed vectors as rows.
        sets: ``(m, d)`` integer array of safe sets.

    Returns:
        ``(m, d, d)`` measurement vectors (``[i, k]`` is the vector of
        channel ``sets[i, k]``) and the ``(m,)`` Gram ranks.
    """
    F = seeds[sets]
    G = F.conj() @ np.swapaxes(F, 1, 2)
    R, rank = inv_sqrt_batch(G, rank_tol)
    return np.swapaxes(R, 1, 2) @ F, rank


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()
_CACHE_MAX = 64


def lowdin_tables(frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL):
    """Safe-set array, Löwdin vectors and ranks for every safe set, cached.

    The cache key is the frame content hash plus ``(n, d, rank_tol)``.
    Returned arrays are read-only.
    """
    if (frame.n, frame.d) != (params.n, params.d):
        raise ValueError(
            f"frame has (n, d) = ({frame.n}, {frame.d}) but the game needs ({params.n}, {params.d})"
        )
    key = (frame.content_hash(), params.n, params.d, rank_tol)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    sets = np.array(enumerate_safe_sets(params), dtype=np.int64).reshape(-1, params.d)
    vecs, rank = lowdin_batch(frame.vectors, sets, rank_tol)
    for arr in (sets, vecs, rank):
        arr.setflags(write=False)
    with _CACHE_LOCK:
        if len(_CACHE) >= _CACHE_MAX:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = (sets, vecs, rank)
    return sets, vecs, rank


def all_bases(
    frame: Frame, params: GameParams, rank_tol: float = DEFAULT_RANK_TOL
) -> dict[SafeSet, MeasurementBasis]:
    """One measurement basis per safe set, in lexicographic safe-set order."""
    sets, vecs, rank = lowdin_tables(frame, params, rank_tol)
    d = params.d
    return {
        tuple(int(c) for c in x): MeasurementBasis(tuple(int(c) for c in x), v, int(r) == d, d - int(r))
        for x, v, r in zip(sets, vecs, rank)
    }


def gram_schmidt_basis(frame: Frame, x) -> MeasurementBasis:
    """Sequential Gram-Schmidt orthonormalization of the seeds of ``x``.

    Only meaningful for linearly independent seeds; used as a reference
    point for the least-squares optimality of the Löwdin basis.
    """
    x = _check_safe_set(frame, x)
    Phi = frame.vectors[list(x)].T
    Q, R = np.linalg.qr(Phi)
    phases = np.diag(R) / np.abs(np.diag(R))
    return MeasurementBasis(x, (Q * phases).T, True, 0)


def distance_to_seeds(frame: Frame, basis: MeasurementBasis) -> float:
    """``sum_c || v_c - phi_c ||^2`` for the channels of ``basis``."""
    F = frame.vectors[list(basis.safe_set)]
    return float(np.sum(np.abs(basis.vectors - F) ** 2))
