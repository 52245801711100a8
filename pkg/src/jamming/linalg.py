"""Hermitian eigendecomposition and (pseudo)inverse square roots.

Two eigensolvers are available: LAPACK through :func:`numpy.linalg.eigh`
(the default, and the only one used in batched hot loops) and a complex
cyclic Jacobi method kept as an independent implementation for
cross-checking small matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalue, NotHermitian, NotSquare

DEFAULT_RANK_TOL = 1e-10
NEGATIVE_TOL = 1e-9
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues in ascending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def check_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``H`` as a complex array after checking shape, finiteness and symmetry."""
    H = np.asarray(H, dtype=complex)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2]:
        raise NotSquare(f"expected square matrices, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")
    diff = np.linalg.norm(H - np.conj(np.swapaxes(H, -1, -2)), axis=(-2, -1))
    scale = np.maximum(1.0, np.linalg.norm(H, axis=(-2, -1)))
    if np.any(diff > tol * scale):
        raise NotHermitian(f"matrix is not Hermitian (max asymmetry {np.max(diff):.3e})")
    return H


def jacobi_eigh(H: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``H[p, q]`` and then
    applies the classical real symmetric rotation, so it zeroes the pivot
    exactly. Sweeps stop once the off-diagonal norm falls below ``tol``
    times the Frobenius norm.
    """
    A = np.array(H, dtype=complex)
    m = A.shape[0]
    V = np.eye(m, dtype=complex)
    scale = max(np.linalg.norm(A), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-3:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2 * mag)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1 / np.hypot(t, 1.0)
                s = t * c
                # R = diag(1, conj(phase)) @ [[c, s], [-s, c]] on rows/cols p, q
                R = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = R.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ R
                A[p, q] = A[q, p] = 0.0
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def hermitian_eig(H, method: str = "lapack") -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        H: Square complex matrix, Hermitian to within ``1e-12`` relative.
        method: ``"lapack"`` or ``"jacobi"``.

    Raises:
        NotSquare: ``H`` is not square.
        NotHermitian: ``H`` is not Hermitian within tolerance.
    """
    H = check_hermitian(H)
    if H.ndim != 2:
        raise NotSquare(f"expected a single matrix, got shape {H.shape}")
    H = (H + H.conj().T) / 2
    if method == "lapack":
        w, V = np.linalg.eigh(H)
    elif method == "jacobi":
        w, V = jacobi_eigh(H)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return EigDecomposition(np.asarray(w, dtype=float), V)


def _spectral_inv_sqrt(w: np.ndarray, rank_tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Map eigenvalues to ``lambda^(-1/2)`` or 0, returning (values, kept mask)."""
    lmax = np.max(w, axis=-1, keepdims=True)
    lmax = np.maximum(lmax, 0.0)
    if np.any(w < -NEGATIVE_TOL * lmax):
        raise NegativeEigenvalue(
            f"eigenvalue {np.min(w):.3e} below -{NEGATIVE_TOL:g} * lambda_max"
        )
    keep = (w > rank_tol * lmax) & (lmax > 0)
    safe = np.where(keep, w, 1.0)
    return np.where(keep, 1 / np.sqrt(safe), 0.0), keep


def inv_sqrt(H, rank_tol: float = DEFAULT_RANK_TOL, method: str = "lapack") -> np.ndarray:
    """Pseudoinverse square root ``(H^+)^(1/2)`` of a PSD Hermitian matrix.

    Eigenvalues at or below ``rank_tol * lambda_max`` are treated as zero;
    small negative roundoff down to ``-1e-9 * lambda_max`` is clamped.

    Raises:
        NegativeEigenvalue: ``H`` has an eigenvalue below ``-1e-9 * lambda_max``.
    """
    eig = hermitian_eig(H, method=method)
    s, _ = _spectral_inv_sqrt(eig.eigenvalues, rank_tol)
    V = eig.eigenvectors
    return (V * s) @ V.conj().T


def inv_sqrt_batch(H: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`inv_sqrt` over the leading axes of ``H``.

    Returns the inverse square roots and the numerical rank of each matrix.
    Inputs are assumed Hermitian; only the lower triangle is read.
    """
    w, V = np.linalg.eigh(H)
    s, keep = _spectral_inv_sqrt(w, rank_tol)
    R = (V * s[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    return R, np.sum(keep, axis=-1)
