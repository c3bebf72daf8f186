"""Entanglement and mixedness measures for two-qubit states.

Negativity is reported as minus twice the sum of the negative eigenvalues of
the partial transpose, so a maximally entangled pair scores 1.  Mixedness is
the linear entropy (4/3)(1 - Tr rho^2), normalized to 1 for the maximally
mixed state.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import spectral

# Partial-transpose eigenvalues in (-EIG_CLAMP, 0) are treated as zero; they
# are numerical noise at the metric tolerances used throughout.
EIG_CLAMP = 1e-12


def _as_matrix(state) -> np.ndarray:
    rho = getattr(state, "rho", state)
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    return rho


def partial_transpose(state) -> np.ndarray:
    """Partial transpose over the second qubit in the (ee, eg, ge, gg) basis.

    Pure index permutation, (rho^T2)[ij, hk] = rho[ik, hj]; applying it twice
    returns the input exactly.
    """
    rho = _as_matrix(state)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(state) -> float:
    """Entanglement negativity: -2 * (sum of negative PT eigenvalues)."""
    w = spectral(partial_transpose(state)).eigenvalues
    negative = w[w <= -EIG_CLAMP]
    return -2.0 * float(np.sum(negative)) + 0.0


def linear_entropy(state) -> float:
    """Linear entropy (4/3)(1 - Tr rho^2), clamped to [0, 1]."""
    rho = _as_matrix(state)
    purity = float(np.trace(rho @ rho).real)
    return min(1.0, max(0.0, (4.0 / 3.0) * (1.0 - purity)))


def x_state_pt_eigenvalues(p_ee: float, p_eg: float, p_ge: float,
                           p_gg: float, coh: float) -> np.ndarray:
    """Closed-form PT spectrum of an X-state with one (ee|gg) coherence.

    The partial transpose moves the coherence onto the (eg, ge) block, so the
    spectrum is {p_ee, p_gg, (p_eg+p_ge)/2 +- sqrt((p_eg-p_ge)^2/4 + coh^2)}.
    Used on the steady-state branch where the eigensolver would be overkill;
    agreement with the Jacobi route is covered by the test suite.
    """
    half_sum = 0.5 * (p_eg + p_ge)
    shift = math.hypot(0.5 * (p_eg - p_ge), coh)
    return np.sort(np.array(
        [p_ee, p_gg, half_sum + shift, half_sum - shift]))


def x_state_negativity(p_ee: float, p_eg: float, p_ge: float,
                       p_gg: float, coh: float) -> float:
    """Negativity of an X-state from the closed-form PT spectrum."""
    w = x_state_pt_eigenvalues(p_ee, p_eg, p_ge, p_gg, coh)
    return -2.0 * float(np.sum(w[w <= -EIG_CLAMP])) + 0.0


def x_state_linear_entropy(p_ee: float, p_eg: float, p_ge: float,
                           p_gg: float, coh: float) -> float:
    """Linear entropy of an X-state without building the matrix."""
    purity = p_ee ** 2 + p_eg ** 2 + p_ge ** 2 + p_gg ** 2 + 2.0 * coh ** 2
    return float(np.clip((4.0 / 3.0) * (1.0 - purity), 0.0, 1.0))
