"""Short-time entanglement-generation test for the dissipative coupling.

For a pure product state of the two qubits, parametrized by Bloch angles
(theta, phi), the sign of one scalar inequality decides whether the common
reservoir starts building entanglement at first order in time:

    (u* A u) (v* C^T v)  <  |u* Re(B) v|^2

with u = (cos 2 theta, -i, 0), v = (cos 2 phi, i, 0) and 3x3 blocks A, B, C
read off the quadratic form of the generator.  A strict inequality means the
product state immediately develops entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import AsymmetricBathParams


@dataclass(frozen=True)
class InitialAngles:
    """Bloch angles of the pure product state cos(t)|e> + sin(t)|g> per qubit."""

    theta: float
    phi: float

    def u_vector(self) -> np.ndarray:
        return np.array([np.cos(2.0 * self.theta), -1.0j, 0.0])

    def v_vector(self) -> np.ndarray:
        return np.array([np.cos(2.0 * self.phi), 1.0j, 0.0])


@dataclass(frozen=True)
class DissipatorBlocks:
    """Unit-rate quadratic-form blocks of the generator plus the rate scale.

    block_a and block_c are Hermitian 3x3 matrices attached to each qubit
    separately; block_b carries the cross-qubit (phase-sensitive) part.  The
    overall decay rate multiplies every block uniformly, so it is kept as a
    separate scalar and only reinstated when numbers are reported.
    """

    block_a: np.ndarray
    block_b: np.ndarray
    block_c: np.ndarray
    scale_gamma: float

    def assembled(self) -> np.ndarray:
        """Full 6x6 coefficient matrix [[A, B], [B^dag, C]] including the rate."""
        top = np.hstack([self.block_a, self.block_b])
        bottom = np.hstack([self.block_b.conj().T, self.block_c])
        return self.scale_gamma * np.vstack([top, bottom])


def build_blocks(bath, gamma: float | None = None) -> DissipatorBlocks:
    """Blocks for a common phase-sensitive reservoir with occupation n, correlation m.

    If gamma is omitted it is taken from the bath (gamma_eff) when present,
    else 1 (scaled time).
    """
    n, m = float(bath.n), float(bath.m)
    if gamma is None:
        gamma = float(getattr(bath, "gamma_eff", 1.0))
    a = np.array([
        [(2.0 * n + 1.0) / 4.0, 0.25j, 0.0],
        [-0.25j, (2.0 * n + 1.0) / 4.0, 0.0],
        [0.0, 0.0, 0.0],
    ])
    b = np.diag([m / 2.0, -m / 2.0, 0.0]).astype(complex)
    return DissipatorBlocks(block_a=a, block_b=b, block_c=a.copy(),
                            scale_gamma=gamma)


@dataclass(frozen=True)
class CriterionResult:
    lhs: float
    rhs: float
    generates: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def entanglement_condition(blocks: DissipatorBlocks,
                           angles: InitialAngles) -> CriterionResult:
    """Evaluate the generation inequality for one product state."""
    u = angles.u_vector()
    v = angles.v_vector()
    g2 = blocks.scale_gamma ** 2
    lhs = g2 * ((u.conj() @ blocks.block_a @ u).real
                * (v.conj() @ blocks.block_c.T @ v).real)
    re_b = 0.5 * (blocks.block_b + blocks.block_b.conj())
    rhs = g2 * abs(u.conj() @ re_b @ v) ** 2
    return CriterionResult(lhs=float(lhs), rhs=float(rhs),
                           generates=bool(lhs < rhs))


def gg_condition(bath) -> CriterionResult:
    """Specialization to both qubits starting in the ground state.

    The inequality collapses to n^2 < m^2, so any phase correlation above the
    thermal-like occupation triggers immediate entanglement generation.
    """
    blocks = build_blocks(bath)
    return entanglement_condition(blocks, InitialAngles(np.pi / 2.0, np.pi / 2.0))


def asymmetric_condition(bath: AsymmetricBathParams) -> bool:
    """Generation test from |gg> when the two qubits see different occupations."""
    return bath.n_a * bath.n_b < bath.m ** 2
