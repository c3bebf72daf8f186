"""Hermitian eigenproblems via cyclic Jacobi rotations.

The matrices diagonalized here are small (4x4 partial transposes, 6x6
dissipator blocks), where a cyclic Jacobi sweep is unconditionally stable
and easy to audit.  Each pivot (p, q) is eliminated by first absorbing the
phase of A[p, q] into column q and then applying the classic real 2x2
rotation, so the same code handles real-symmetric and complex-Hermitian
input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diagonal(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(matrix: np.ndarray, tol: float = OFF_DIAGONAL_TOL,
                max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray, float]:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : (n, n) array_like, Hermitian
    tol : float
        Sweeping stops when the off-diagonal Frobenius norm falls below
        tol * max(1, |A|_max).
    max_sweeps : int
        Safety bound; quadratic convergence makes ~10 sweeps typical.

    Returns
    -------
    (w, v, residual) : eigenvalues ascending, eigenvectors as columns of v
        with A v[:, k] = w[k] v[:, k], and the max residual
        |A v_k - w_k v_k|_2 measured against the input matrix.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dim = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))) if dim else 1.0)
    if float(np.max(np.abs(a - a.conj().T))) > 1e-9 * scale:
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    original = a.copy()
    v = np.eye(dim, dtype=complex)

    for _ in range(max_sweeps):
        if _off_norm(a) <= tol * scale:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 0.1 * tol * scale:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                # Real symmetric Schur rotation for [[app, mag], [mag, aqq]].
                tau = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.eye(dim, dtype=complex)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -s * np.conj(phase)
                rot[q, q] = c * np.conj(phase)
                a = rot.conj().T @ a @ rot
                v = v @ rot
    else:
        raise ArithmeticError(
            f"Jacobi sweep did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {_off_norm(a):.3e})"
        )

    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Residual against the (symmetrized) input, not the rotated copy.
    resid = float(np.max(np.linalg.norm(original @ v - v * w, axis=0))) if dim else 0.0
    return w, v, resid


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalues of a Hermitian matrix plus the achieved residual."""

    eigenvalues: np.ndarray  # real, ascending
    residual: float          # max_k |A v_k - w_k v_k|_2


def spectral(matrix: np.ndarray, tol: float = OFF_DIAGONAL_TOL) -> SpectralResult:
    """Eigenvalues (ascending) of a Hermitian matrix with residual report."""
    w, _, resid = jacobi_eigh(matrix, tol=tol)
    w = w.copy()
    w.flags.writeable = False
    return SpectralResult(eigenvalues=w, residual=resid)


def trace_distance(rho_1: np.ndarray, rho_2: np.ndarray) -> float:
    """Trace distance (1/2)|rho_1 - rho_2|_1 between Hermitian matrices."""
    diff = np.asarray(rho_1, dtype=complex) - np.asarray(rho_2, dtype=complex)
    w, _, _ = jacobi_eigh(diff)
    return 0.5 * float(np.sum(np.abs(w)))
