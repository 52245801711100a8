"""Haar-random Monte Carlo estimates of alignment and overlap averages.

Samples are generated in fixed-size chunks. Chunk ``i`` of a run draws from
its own stream keyed by ``(seed, quantity tag, parameters, i)``, so results
do not depend on how chunks are spread over workers. Per-sample values are
concatenated in chunk order and reduced with :func:`math.fsum`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .combinatorics import GameParams, enumerate_safe_sets, hypergeom_pj, min_intersection
from .errors import BudgetExceeded
from .frames import haar_vectors
from .game import omega_batch
from .linalg import DEFAULT_RANK_TOL

CHUNK = 8192
DIRECT_BUDGET = 500
_TAGS = {"alpha": 1, "alpha_pgm": 2, "Lj": 3, "Ewq": 4}


@dataclass(frozen=True)
class EstimateResult:
    """Sample mean with its standard error.

    ``stderr`` is the unbiased sample standard deviation over ``sqrt(samples)``;
    ``redrawn`` counts numerically degenerate samples that were replaced.
    """

    quantity: str
    mean: float
    stderr: float
    samples: int
    seed: int
    params: dict = field(default_factory=dict)
    redrawn: int = 0

    def to_record(self) -> dict:
        return {
            "quantity": self.quantity,
            "params": dict(self.params),
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "redrawn": self.redrawn,
        }

    def zscore(self, value: float) -> float:
        """Signed distance of ``value`` from the mean in standard errors."""
        if self.stderr > 0:
            return (self.mean - value) / self.stderr
        return 0.0 if self.mean == value else math.copysign(math.inf, self.mean - value)


def _summarize(values: np.ndarray) -> tuple[float, float]:
    m = len(values)
    mean = math.fsum(values) / m
    if m < 2:
        return mean, math.nan
    var = math.fsum((values - mean) ** 2) / (m - 1)
    return mean, math.sqrt(var / m)


def _chunk_rng(seed: int, key: tuple[int, ...], index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(*key, index)))


def _run(
    sampler: Callable[[np.random.Generator, int], tuple[np.ndarray, int]],
    samples: int,
    seed: int,
    key: tuple[int, ...],
    workers: int = 1,
) -> tuple[np.ndarray, int]:
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    sizes = [min(CHUNK, samples - s) for s in range(0, samples, CHUNK)]

    def task(i):
        return sampler(_chunk_rng(seed, key, i), sizes[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, range(len(sizes))))
    else:
        results = [task(i) for i in range(len(sizes))]
    values = np.concatenate([r[0] for r in results])
    return values, sum(r[1] for r in results)


def _redraw(draw: Callable[[int], np.ndarray], degenerate: Callable[[np.ndarray], np.ndarray], size: int):
    """Draw ``size`` samples, replacing those flagged degenerate; returns (samples, redraw count)."""
    batch = draw(size)
    redrawn = 0
    bad = np.flatnonzero(degenerate(batch))
    while bad.size:
        redrawn += bad.size
        batch[bad] = draw(bad.size)
        bad = bad[degenerate(batch[bad])]
    return batch, redrawn


def _ill_conditioned(mats: np.ndarray, rank_tol: float) -> np.ndarray:
    """Flag PSD matrices (over the leading axes) whose eigenvalue ratio is at most ``rank_tol``."""
    w = np.linalg.eigvalsh(mats)
    return w[..., 0] <= rank_tol * w[..., -1]


def _inv_sqrt_psd(S: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    return (V / np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _frame_operator(vecs: np.ndarray) -> np.ndarray:
    """``sum_a |phi_a><phi_a|`` over axis -2 of ``vecs``."""
    return np.swapaxes(vecs, -1, -2) @ vecs.conj()


def estimate_alpha(
    d: int, samples: int, seed: int, workers: int = 1, rank_tol: float = DEFAULT_RANK_TOL
) -> EstimateResult:
    """Estimate ``alpha_d = E[<0|S^(-1/2)|0>^2]`` with ``S`` the frame operator of ``e_0`` and ``d - 1`` Haar vectors."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    e0 = np.zeros(d, dtype=complex)
    e0[0] = 1

    def sampler(rng, size):
        def draw(m):
            out = np.empty((m, d, d), dtype=complex)
            out[:, 0] = e0
            out[:, 1:] = haar_vectors(rng, (m, d - 1, d))
            return out

        vecs, redrawn = _redraw(draw, lambda v: _ill_conditioned(_frame_operator(v), rank_tol), size)
        R = _inv_sqrt_psd(_frame_operator(vecs))
        return R[:, 0, 0].real ** 2, redrawn

    values, redrawn = _run(sampler, samples, seed, (_TAGS["alpha"], d), workers)
    mean, se = _summarize(values)
    return EstimateResult("alpha", mean, se, samples, seed, {"d": d}, redrawn)


def estimate_alpha_via_pgm(
    d: int, samples: int, seed: int, workers: int = 1, rank_tol: float = DEFAULT_RANK_TOL
) -> EstimateResult:
    """Estimate the pretty-good-measurement success rate for ``d`` equiprobable Haar states.

    Per sample, ``P = (1/d) sum_a <phi_a|S^(-1/2)|phi_a>^2`` with ``S`` the frame operator.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")

    def sampler(rng, size):
        vecs, redrawn = _redraw(
            lambda m: haar_vectors(rng, (m, d, d)),
            lambda v: _ill_conditioned(_frame_operator(v), rank_tol),
            size,
        )
        R = _inv_sqrt_psd(_frame_operator(vecs))
        diag = np.einsum("bai,bij,baj->ba", vecs.conj(), R, vecs).real
        return np.mean(diag**2, axis=1), redrawn

    values, redrawn = _run(sampler, samples, seed, (_TAGS["alpha_pgm"], d), workers)
    mean, se = _summarize(values)
    return EstimateResult("alpha", mean, se, samples, seed, {"d": d, "estimator": "pgm"}, redrawn)


def canonical_pair(d: int, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Safe sets ``X = {0..d-1}`` and ``Y = {0..j-1} + {d..2d-j-1}`` meeting in ``j`` channels."""
    return tuple(range(d)), tuple(range(j)) + tuple(range(d, 2 * d - j))


def estimate_Lj(
    params: GameParams,
    j: int,
    samples: int,
    seed: int,
    workers: int = 1,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> EstimateResult:
    """Estimate the mean squared overlap ``|<v_X^0|v_Y^0>|^2`` for Haar seeds with ``|X & Y| = j``.

    The overlap law depends only on ``j`` and ``d``, so one canonical pair of
    safe sets is used. ``j = d`` means ``X = Y`` and returns exactly 1.
    """
    d = params.d
    if not min_intersection(params) <= j <= d:
        raise ValueError(f"j must lie in [{min_intersection(params)}, {d}] for n={params.n}, d={d}, got {j}")
    info = {**params.as_dict(), "j": j}
    if j == d:
        return EstimateResult("Lj", 1.0, 0.0, samples, seed, info, 0)
    X, Y = canonical_pair(d, j)
    sets = np.array([X, Y])
    m = 2 * d - j

    def sampler(rng, size):
        def degenerate(seeds):
            F = seeds[:, sets]
            return np.any(_ill_conditioned(F.conj() @ np.swapaxes(F, -1, -2), rank_tol), axis=1)

        seeds, redrawn = _redraw(lambda k: haar_vectors(rng, (k, m, d)), degenerate, size)
        F = seeds[:, sets]
        G = F.conj() @ np.swapaxes(F, -1, -2)
        R = _inv_sqrt_psd(G)
        vx = np.einsum("ba,bai->bi", R[:, 0, :, 0], F[:, 0])
        vy = np.einsum("ba,bai->bi", R[:, 1, :, 0], F[:, 1])
        return np.abs(np.sum(vx.conj() * vy, axis=1)) ** 2, redrawn

    values, redrawn = _run(sampler, samples, seed, (_TAGS["Lj"], params.n, d, j), workers)
    mean, se = _summarize(values)
    return EstimateResult("Lj", mean, se, samples, seed, info, redrawn)


def estimate_Ewq(
    params: GameParams,
    samples: int,
    seed: int,
    method: str = "direct",
    workers: int = 1,
    rank_tol: float = DEFAULT_RANK_TOL,
    budget: int = DIRECT_BUDGET,
) -> EstimateResult:
    """Estimate the expected winning probability of a Haar-random seed frame.

    ``method="direct"`` evaluates the full strategy on every sampled frame
    (needs ``C(n, d) <= budget``); ``method="decomposed"`` combines
    :func:`estimate_Lj` over intersection sizes with hypergeometric weights.
    """
    n, d = params.n, params.d
    info = {**params.as_dict(), "method": method}
    if method == "decomposed":
        terms, var, redrawn = [], [], 0
        for j in range(min_intersection(params), d + 1):
            p = float(hypergeom_pj(params, j))
            if p == 0:
                continue
            est = estimate_Lj(params, j, samples, seed, workers, rank_tol)
            terms.append(p * est.mean)
            var.append((p * est.stderr) ** 2)
            redrawn += est.redrawn
        scale = d / n
        return EstimateResult(
            "Ewq", scale * math.fsum(terms), scale * math.sqrt(math.fsum(var)), samples, seed, info, redrawn
        )
    if method != "direct":
        raise ValueError(f"method must be 'direct' or 'decomposed', got {method!r}")
    sets = np.array(enumerate_safe_sets(params), dtype=np.int64).reshape(-1, d)
    if len(sets) > budget:
        raise BudgetExceeded(len(sets), budget)

    def sampler(rng, size):
        def degenerate(seeds):
            F = seeds[:, sets]
            return np.any(_ill_conditioned(F.conj() @ np.swapaxes(F, -1, -2), rank_tol), axis=1)

        seeds, redrawn = _redraw(lambda k: haar_vectors(rng, (k, n, d)), degenerate, size)
        F = seeds[:, sets]
        G = F.conj() @ np.swapaxes(F, -1, -2)
        vecs = np.swapaxes(_inv_sqrt_psd(G), -1, -2) @ F
        return omega_batch(vecs, sets, n), redrawn

    values, redrawn = _run(sampler, samples, seed, (_TAGS["Ewq"], n, d), workers)
    mean, se = _summarize(values)
    return EstimateResult("Ewq", mean, se, samples, seed, info, redrawn)
