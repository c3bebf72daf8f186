"""Reduced two-qubit model driven by a phase-sensitive reservoir.

The two qubits couple to a common broadband squeezed reservoir; after the
field is eliminated the state stays in the "X" family

    rho = [[p_ee, 0,    0,    coh ],
           [0,    p_eg, 0,    0   ],
           [0,    0,    p_ge, 0   ],
           [coh,  0,    0,    p_gg]]

in the basis |ee>, |eg>, |ge>, |gg>, with a real two-photon coherence
coh = <ee|rho|gg>.  Everything here works in scaled time tau = gamma * t, so
the decay rate never appears explicitly.

Equations of motion (N = thermal-like occupation, M = phase correlation):

    dp_ee/dtau = -2(N+1) p_ee + N (p_eg + p_ge) + 2 M coh
    dp_eg/dtau = N (1 - p_ge) + p_ee - (3N+1) p_eg - 2 M coh
    dp_ge/dtau = N (1 - p_eg) + p_ee - (3N+1) p_ge - 2 M coh
    dcoh/dtau  = -(2N+1) coh + M (1 - 2 p_eg - 2 p_ge)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import integrate
from .linalg import spectral
from .params import (
    BathParams,
    EffectiveBath,
    SingularSystem,
    UnsupportedInitialState,
)

X_FORM_TOL = 1e-12


def bath_nm(bath) -> tuple[float, float]:
    """(N, M) from any bath-like object exposing .n and .m."""
    return float(bath.n), float(bath.m)


@dataclass(frozen=True)
class BlochVector:
    """Population/coherence coordinates (p_ee, p_eg, p_ge, coh) of an X state."""

    p_ee: float
    p_eg: float
    p_ge: float
    coh: float

    @property
    def p_gg(self) -> float:
        return 1.0 - self.p_ee - self.p_eg - self.p_ge

    def as_array(self) -> np.ndarray:
        return np.array([self.p_ee, self.p_eg, self.p_ge, self.coh])

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        v = np.asarray(v, dtype=float)
        if v.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {v.shape}")
        return cls(*v)

    def validate(self, psd_tol: float = 1e-8) -> "BlochVector":
        """Check the implied density matrix is positive within psd_tol.

        The X form diagonalizes in closed form: eigenvalues are p_eg, p_ge
        and (p_ee + p_gg)/2 +- sqrt((p_ee - p_gg)^2/4 + coh^2).
        """
        half_sum = 0.5 * (self.p_ee + self.p_gg)
        split = np.hypot(0.5 * (self.p_ee - self.p_gg), self.coh)
        low = min(self.p_eg, self.p_ge, half_sum - split)
        if low < -psd_tol:
            raise ValueError(f"state not positive: min eigenvalue {low:.3e}")
        return self


INITIAL_STATES: dict[str, BlochVector] = {
    "gg": BlochVector(0.0, 0.0, 0.0, 0.0),
    "ee": BlochVector(1.0, 0.0, 0.0, 0.0),
    "eg": BlochVector(0.0, 1.0, 0.0, 0.0),
    "ge": BlochVector(0.0, 0.0, 1.0, 0.0),
}


@dataclass(frozen=True)
class TwoQubitState:
    """Validated 4x4 two-qubit density matrix (read-only)."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_matrix(cls, rho, trace_tol: float = 1e-10,
                    herm_tol: float = 1e-10,
                    psd_tol: float = 1e-10) -> "TwoQubitState":
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"expected 4x4 matrix, got {rho.shape}")
        tr = np.trace(rho)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} differs from 1 by > {trace_tol}")
        if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
            raise ValueError("matrix is not Hermitian within tolerance")
        low = spectral(rho).eigenvalues[0]
        if low < -psd_tol:
            raise ValueError(f"matrix not positive: min eigenvalue {low:.3e}")
        return cls(rho)


def reconstruct_density(v: BlochVector, psd_tol: float = 1e-8) -> TwoQubitState:
    """Assemble the X-form density matrix from Bloch coordinates."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = v.p_ee
    rho[1, 1] = v.p_eg
    rho[2, 2] = v.p_ge
    rho[3, 3] = v.p_gg
    rho[0, 3] = rho[3, 0] = v.coh
    return TwoQubitState.from_matrix(rho, trace_tol=1e-9, psd_tol=psd_tol)


def bloch_from_density(rho) -> BlochVector:
    """Extract Bloch coordinates; reject anything outside the X family."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise UnsupportedInitialState(f"expected 4x4 matrix, got {rho.shape}")
    mask = np.zeros((4, 4), dtype=bool)
    mask[0, 0] = mask[1, 1] = mask[2, 2] = mask[3, 3] = True
    mask[0, 3] = mask[3, 0] = True
    stray = np.max(np.abs(rho[~mask]))
    if stray > X_FORM_TOL:
        raise UnsupportedInitialState(
            f"matrix has non-X entries up to {stray:.3e}")
    if abs(rho[0, 3].imag) > X_FORM_TOL or abs(rho[0, 3] - rho[3, 0].conj()) > X_FORM_TOL:
        raise UnsupportedInitialState("two-photon coherence must be real")
    return BlochVector(rho[0, 0].real, rho[1, 1].real, rho[2, 2].real,
                       rho[0, 3].real)


def _rhs_array(v: np.ndarray, n: float, m: float) -> np.ndarray:
    p_ee, p_eg, p_ge, coh = v
    return np.array([
        -2.0 * (n + 1.0) * p_ee + n * (p_eg + p_ge) + 2.0 * m * coh,
        n * (1.0 - p_ge) + p_ee - (3.0 * n + 1.0) * p_eg - 2.0 * m * coh,
        n * (1.0 - p_eg) + p_ee - (3.0 * n + 1.0) * p_ge - 2.0 * m * coh,
        -(2.0 * n + 1.0) * coh + m * (1.0 - 2.0 * p_eg - 2.0 * p_ge),
    ])


def bloch_rhs(v: BlochVector, bath) -> BlochVector:
    """Time derivative of the Bloch coordinates in scaled time."""
    n, m = bath_nm(bath)
    return BlochVector.from_array(_rhs_array(v.as_array(), n, m))


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: times (T,) and Bloch coordinates (T, 4)."""

    times: np.ndarray
    states: np.ndarray

    @property
    def p_ee(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def p_eg(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def p_ge(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def coh(self) -> np.ndarray:
        return self.states[:, 3]

    def vector(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.states[i])

    def final(self) -> BlochVector:
        return self.vector(-1)


def evolve(v0: BlochVector, bath, tau_grid, method: str = "adaptive",
           rtol: float = integrate.REL_TOL, atol: float = integrate.ABS_TOL,
           fixed_step: float = integrate.FIXED_STEP,
           psd_tol: float = 1e-8) -> Trajectory:
    """Integrate the Bloch equations over tau_grid.

    method "adaptive" uses the embedded 4(5) pair; "fixed" uses the
    deterministic fixed-step rule.  Every sampled state is checked for
    positivity within psd_tol.
    """
    v0.validate(psd_tol=psd_tol)
    n, m = bath_nm(bath)
    rhs = lambda _t, y: _rhs_array(y, n, m)
    tau_grid = np.asarray(tau_grid, dtype=float)
    if method == "adaptive":
        states = integrate.solve_adaptive(rhs, v0.as_array(), tau_grid,
                                          rtol=rtol, atol=atol)
    elif method == "fixed":
        states = integrate.solve_fixed_rk4(rhs, v0.as_array(), tau_grid,
                                           max_step=fixed_step)
    else:
        raise ValueError(f"unknown method {method!r}")
    traj = Trajectory(times=tau_grid, states=states)
    for i in range(states.shape[0]):
        traj.vector(i).validate(psd_tol=psd_tol)
    return traj


def steady_state(bath) -> BlochVector:
    """Stationary Bloch vector, exact up to the linear solve.

    Symmetry p_eg = p_ge collapses the fixed point to three unknowns
    x = (p_ee, p_s, coh):

        [-2(N+1)   2N      2M   ] [p_ee]   [ 0]
        [ 1      -(4N+1)  -2M   ] [p_s ] = [-N]
        [ 0       -4M    -(2N+1)] [coh ]   [-M]
    """
    n, m = bath_nm(bath)
    a = np.array([
        [-2.0 * (n + 1.0), 2.0 * n, 2.0 * m],
        [1.0, -(4.0 * n + 1.0), -2.0 * m],
        [0.0, -4.0 * m, -(2.0 * n + 1.0)],
    ])
    b = np.array([0.0, -n, -m])
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"stationary system is singular: {exc}") from exc
    residual = np.max(np.abs(a @ x - b))
    if residual > 1e-10 * max(1.0, n, m):
        raise SingularSystem(f"stationary solve residual {residual:.3e}")
    p_ee, p_s, coh = x
    return BlochVector(p_ee, p_s, p_s, coh)
