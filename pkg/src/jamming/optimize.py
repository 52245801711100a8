"""Numerical maximization of the quantum winning probability.

Two searches are offered. :func:`optimize_seed` varies the seed frame and
keeps the Löwdin construction; :func:`optimize_rank1` drops the frame and
lets every safe set choose its own orthonormal basis, parametrized as
``U = exp(iH)`` with ``H`` Hermitian. Both run L-BFGS-B from several random
starting points and keep the best local optimum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize

from .combinatorics import GameParams, classical_value, enumerate_safe_sets
from .errors import BudgetExceeded, NonFiniteObjective
from .frames import Frame, make_frame
from .game import channel_operators, omega_from_vectors, quantum_value
from .linalg import DEFAULT_RANK_TOL
from .measurement import lowdin_batch

DEFAULT_RESTARTS = 10
DEFAULT_TOL = 1e-10
DEFAULT_MAXITER = 1000
FD_STEP = 1e-6
MAX_SAFE_SETS = 500
TIE_TOL = 1e-12


@dataclass(frozen=True)
class OptimizationResult:
    """Best local optimum over all restarts.

    ``best`` is a :class:`~jamming.frames.Frame` for seed searches and an
    ``(m, d, d)`` array of per-safe-set measurement vectors for rank-1
    searches (``best[i, k]`` belongs to channel ``sets[i, k]``).
    """

    kind: str
    params: GameParams
    best_value: float
    best: Frame | np.ndarray
    sets: np.ndarray
    restarts: int
    converged_restarts: int
    per_restart_values: list[float]
    tolerance: float
    seed: int
    best_restart: int
    iterations: list[int] = field(default_factory=list)

    def reevaluate(self) -> float:
        """Recompute the value of ``best`` through the game module."""
        if self.kind == "seed":
            return quantum_value(self.best, self.params).omega
        return omega_from_vectors(self.best, self.sets, self.params.n)

    def to_record(self) -> dict:
        omega_c = float(classical_value(self.params))
        return {
            **self.params.as_dict(),
            "kind": self.kind,
            "best_value": self.best_value,
            "omega_c": omega_c,
            "ratio": self.best_value / omega_c,
            "restarts": self.restarts,
            "converged_restarts": self.converged_restarts,
            "per_restart_values": list(self.per_restart_values),
            "best_restart": self.best_restart,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }


def _safe_sets(params: GameParams, max_safe_sets: int) -> np.ndarray:
    if params.num_safe_sets > max_safe_sets:
        raise BudgetExceeded(params.num_safe_sets, max_safe_sets)
    return np.array(enumerate_safe_sets(params), dtype=np.int64).reshape(-1, params.d)


def seed_vectors(p: np.ndarray, n: int, d: int) -> np.ndarray:
    """Unit seed vectors from ``2 n d`` reals: real parts first, then imaginary parts."""
    F = (p[: n * d] + 1j * p[n * d:]).reshape(n, d)
    return F / np.linalg.norm(F, axis=1, keepdims=True)


def seed_objective(params: GameParams, rank_tol: float = DEFAULT_RANK_TOL, max_safe_sets: int = MAX_SAFE_SETS):
    """Value of the Löwdin strategy as a function of the ``2 n d`` seed parameters."""
    sets = _safe_sets(params, max_safe_sets)
    n, d = params.n, params.d

    def value(p: np.ndarray) -> float:
        vecs, _ = lowdin_batch(seed_vectors(p, n, d), sets, rank_tol)
        return omega_from_vectors(vecs, sets, n)

    return value, sets


def central_difference(f: Callable[[np.ndarray], float], h: float = FD_STEP):
    """Componentwise central-difference gradient of ``f``."""

    def grad(p: np.ndarray) -> np.ndarray:
        out = np.empty_like(p)
        step = np.zeros_like(p)
        for i in range(len(p)):
            step[i] = h
            out[i] = (f(p + step) - f(p - step)) / (2 * h)
            step[i] = 0.0
        return out

    return grad


def _hermitian_params(d: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(d, 1)


def rank1_unitaries(p: np.ndarray, m: int, d: int):
    """Unitaries ``exp(iH_x)`` from ``d^2`` reals per safe set, with their eigendata.

    Per safe set the parameters are the ``d`` diagonal entries of ``H``,
    then the real and the imaginary parts of its strict upper triangle.
    """
    iu = _hermitian_params(d)
    t = len(iu[0])
    p = p.reshape(m, d * d)
    H = np.zeros((m, d, d), dtype=complex)
    H[:, np.arange(d), np.arange(d)] = p[:, :d]
    off = p[:, d:d + t] + 1j * p[:, d + t:]
    H[:, iu[0], iu[1]] = off
    H[:, iu[1], iu[0]] = off.conj()
    lam, V = np.linalg.eigh(H)
    U = (V * np.exp(1j * lam)[:, None, :]) @ np.conj(np.swapaxes(V, 1, 2))
    return U, lam, V


def rank1_objective(params: GameParams, max_safe_sets: int = MAX_SAFE_SETS):
    """Value and analytic gradient over per-safe-set unitaries ``exp(iH)``.

    Returns ``(value_and_grad, sets, size)`` where ``value_and_grad(p)``
    gives the value and its gradient with respect to ``p``.
    """
    sets = _safe_sets(params, max_safe_sets)
    n, d = params.n, params.d
    m = len(sets)
    iu = _hermitian_params(d)
    norm = d * m * m

    def value_and_grad(p: np.ndarray) -> tuple[float, np.ndarray]:
        U, lam, V = rank1_unitaries(p, m, d)
        vecs = np.swapaxes(U, 1, 2)  # vecs[i, k] is column k of U_i
        A = channel_operators(vecs, sets, n)
        value = math.fsum(np.sum(np.abs(A) ** 2, axis=(1, 2))) / norm
        # d||A_c||^2 = 4 Re <A_c u, du>, so the gradient w.r.t. column k of U_i is 4 A_c u
        G = 4 * np.einsum("ikpq,ikq->ipk", A[sets], vecs) / norm
        # Frechet derivative of exp(iH): divided differences of exp(i lambda)
        e = np.exp(1j * lam)
        diff = lam[:, :, None] - lam[:, None, :]
        close = np.abs(diff) < 1e-12
        safe = np.where(close, 1.0, diff)
        F = np.where(close, 1j * e[:, :, None], (e[:, :, None] - e[:, None, :]) / safe)
        Vh = np.conj(np.swapaxes(V, 1, 2))
        W = V @ ((Vh @ G @ V) * np.conj(F)) @ Vh
        grad = np.empty((m, d * d))
        grad[:, :d] = np.real(W[:, np.arange(d), np.arange(d)])
        grad[:, d:d + len(iu[0])] = np.real(W[:, iu[0], iu[1]] + W[:, iu[1], iu[0]])
        grad[:, d + len(iu[0]):] = np.imag(W[:, iu[0], iu[1]]) - np.imag(W[:, iu[1], iu[0]])
        return value, grad.ravel()

    return value_and_grad, sets, m * d * d


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))


def _check_finite(value: float, p: np.ndarray):
    if not math.isfinite(value):
        raise NonFiniteObjective(f"objective is {value} at a parameter vector of norm {np.linalg.norm(p):.3g}")


def _multistart(
    run_one: Callable[[int], tuple[float, np.ndarray, bool, int]], restarts: int, workers: int
):
    if restarts < 1:
        raise ValueError(f"restarts must be positive, got {restarts}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_one, range(restarts)))
    else:
        runs = [run_one(r) for r in range(restarts)]
    values = [r[0] for r in runs]
    top = max(values)
    best = next(i for i, v in enumerate(values) if v >= top - TIE_TOL)
    return runs, values, best


def optimize_seed(
    params: GameParams,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    maxiter: int = DEFAULT_MAXITER,
    rank_tol: float = DEFAULT_RANK_TOL,
    workers: int = 1,
    max_safe_sets: int = MAX_SAFE_SETS,
) -> OptimizationResult:
    """Maximize the Löwdin-strategy value over seed frames.

    Each restart draws standard normal parameters from its own stream
    ``(seed, restart)`` and runs L-BFGS-B with central-difference gradients.

    Raises:
        BudgetExceeded: More than ``max_safe_sets`` safe sets.
        NonFiniteObjective: The objective evaluated to NaN or infinity.
    """
    value, sets = seed_objective(params, rank_tol, max_safe_sets)
    n, d = params.n, params.d

    def neg(p):
        v = value(p)
        _check_finite(v, p)
        return -v

    grad = central_difference(neg)

    def run_one(r):
        p0 = _restart_rng(seed, r).standard_normal(2 * n * d)
        res = minimize(neg, p0, jac=grad, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": tol, "gtol": 1e-9})
        return -float(res.fun), res.x, bool(res.success), int(res.nit)

    runs, values, best = _multistart(run_one, restarts, workers)
    frame = Frame(seed_vectors(runs[best][1], n, d), "optimized")
    return OptimizationResult(
        "seed", params, values[best], frame, sets, restarts,
        sum(r[2] for r in runs), values, tol, seed, best, [r[3] for r in runs],
    )


def optimize_rank1(
    params: GameParams,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    maxiter: int = DEFAULT_MAXITER,
    workers: int = 1,
    max_safe_sets: int = MAX_SAFE_SETS,
    scale: float = 1.0,
) -> OptimizationResult:
    """Maximize over independent orthonormal bases for every safe set.

    Basis ``x`` is the column set of ``exp(iH_x)``, column ``k`` labelling
    channel ``x[k]``. Gradients are exact (Fréchet derivative of the matrix
    exponential). Starting points are normal with standard deviation ``scale``.
    """
    value_and_grad, sets, size = rank1_objective(params, max_safe_sets)
    m, d = len(sets), params.d

    def neg(p):
        v, g = value_and_grad(p)
        _check_finite(v, p)
        return -v, -g

    def run_one(r):
        p0 = scale * _restart_rng(seed, r).standard_normal(size)
        res = minimize(neg, p0, jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": tol, "gtol": 1e-9})
        return -float(res.fun), res.x, bool(res.success), int(res.nit)

    runs, values, best = _multistart(run_one, restarts, workers)
    U, _, _ = rank1_unitaries(runs[best][1], m, d)
    return OptimizationResult(
        "rank1", params, values[best], np.swapaxes(U, 1, 2), sets, restarts,
        sum(r[2] for r in runs), values, tol, seed, best, [r[3] for r in runs],
    )


@dataclass(frozen=True)
class ScanRow:
    n: int
    d: int
    omega_q: float | None
    omega_c: float
    ratio: float | None
    skipped: str | None = None

    def to_record(self) -> dict:
        return {"n": self.n, "d": self.d, "omega_q": self.omega_q, "omega_c": self.omega_c,
                "ratio": self.ratio, "skipped": self.skipped}


def scan(frame_family: str, d: int, n_range: Iterable[int], seed: int = 0) -> list[ScanRow]:
    """Value, classical value and ratio of one frame family across ``n``.

    Rows where the family cannot be built keep the classical value and
    record the reason in ``skipped``.
    """
    rows = []
    for n in n_range:
        params = GameParams.from_nd(n, d)
        omega_c = float(classical_value(params))
        try:
            frame = make_frame(frame_family, n, d, seed)
        except ValueError as exc:
            rows.append(ScanRow(n, d, None, omega_c, None, str(exc)))
            continue
        omega = quantum_value(frame, params).omega
        rows.append(ScanRow(n, d, omega, omega_c, omega / omega_c))
    return rows
