"""Unreduced model: two qubit-cavity pairs sharing a broadband squeezed drive.

Basis ordering is qubit1 (x) qubit2 (x) mode_a (x) mode_b with qubit index 0
meaning |e> and 1 meaning |g>, and both Fock spaces truncated at n_max, so
the density matrix is D x D with D = 4 (n_max + 1)^2.

The generator has three parts:

* coherent exchange H = Omega (s1+ a + a^dag s1- + s2+ b + b^dag s2-);
* the cavity dissipator at rate kappa driven by the squeezed field,

    L_cav rho = 2k(N+1) (D[a] + D[b]) rho + 2kN (D[a^dag] + D[b^dag]) rho
                + 2kM [(a rho b + b rho a - ab rho - rho ab) + h.c.-with-daggers]

  which is 2k (D[c1] + D[c2]) for the Bogoliubov pair c1 = cosh(r) a
  + sinh(r) b^dag, c2 = cosh(r) b + sinh(r) a^dag when M = sqrt(N(N+1)),
  so conjugating by S = exp(r(a^dag b^dag - ab)) with r = asinh(sqrt(N))
  maps the jumps to plain a and b (S c1 S^dag = a).  Its unique Gaussian
  fixed point (at Omega = 0) has <a^dag a> = <b^dag b> = N and <ab> = -M
  with this mode-phase convention (the pairing the qubits inherit after
  eliminating the modes is +M, matching the reduced description; flipping
  b -> -b exchanges the two signs).  Field amplitude decays at kappa,
  photon number at 2 kappa, which is what makes the eliminated qubit
  decay rate 2 Omega^2/kappa;
* optional local qubit decay Gamma (D[s1-] + D[s2-]).

The right-hand side is applied as a matrix map, never materialized as a
D^2 x D^2 superoperator: with K collecting -iH and all one-sided products,

    d rho / dt = K rho + rho K^dag + (sandwich terms),

which costs a couple dozen D x D products per evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sparse
from scipy.linalg import expm

from . import integrate
from .params import (
    BathParams,
    SystemRates,
    TruncationOverflow,
    Unphysical,
)

TOP_LEVEL_BUDGET = 1e-3
FULL_REL_TOL = 1e-8
FULL_ABS_TOL = 1e-10


@lru_cache(maxsize=8)
def _ops(n_max: int):
    """Truncated operators on the composite space, cached per n_max."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    f = n_max + 1
    i2 = np.eye(2, dtype=complex)
    i_f = np.eye(f, dtype=complex)
    sm = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    sp = sm.conj().T
    ann = np.zeros((f, f), dtype=complex)
    for k in range(n_max):
        ann[k, k + 1] = math.sqrt(k + 1.0)

    def kron4(q1, q2, fa, fb):
        return np.kron(np.kron(np.kron(q1, q2), fa), fb)

    ops = {
        "f": f,
        "dim": 4 * f * f,
        "sm1": kron4(sm, i2, i_f, i_f),
        "sp1": kron4(sp, i2, i_f, i_f),
        "sm2": kron4(i2, sm, i_f, i_f),
        "sp2": kron4(i2, sp, i_f, i_f),
        "a": kron4(i2, i2, ann, i_f),
        "b": kron4(i2, i2, i_f, ann),
    }
    ops["ad"] = ops["a"].conj().T
    ops["bd"] = ops["b"].conj().T
    # diagonal mask of basis states with either mode at the top Fock level
    top = np.zeros(ops["dim"], dtype=bool)
    for q in range(4):
        for na in range(f):
            for nb in range(f):
                if max(na, nb) == n_max:
                    top[(q * f + na) * f + nb] = True
    ops["top_mask"] = top
    # exact integer counts; operator products would round sqrt(k)**2
    counts = np.zeros(ops["dim"], dtype=float)
    for q in range(4):
        q_exc = 2 - (q >> 1) - (q & 1)
        for na in range(f):
            for nb in range(f):
                counts[(q * f + na) * f + nb] = q_exc + na + nb
    ops["n_exc"] = np.diag(counts).astype(complex)
    return ops


def basis_index(qubits: str, n_a: int, n_b: int, n_max: int) -> int:
    """Flat index of |q1 q2, n_a n_b> with 'e' before 'g' in each qubit slot."""
    f = n_max + 1
    q = {"e": 0, "g": 1}
    q1, q2 = qubits
    return ((q[q1] * 2 + q[q2]) * f + n_a) * f + n_b


@dataclass(frozen=True)
class TruncationBudget:
    """Fock cutoff with the expected stationary weight above it."""

    n_max: int
    leakage_estimate: float

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")
        if not 0.0 <= self.leakage_estimate < 1.0:
            raise ValueError(
                f"leakage_estimate must be in [0, 1), got {self.leakage_estimate}")

    @classmethod
    def for_bath(cls, bath: BathParams, n_max: int) -> "TruncationBudget":
        """Geometric tail of the stationary per-mode photon distribution.

        Each mode settles to a thermal marginal with mean n, whose number
        distribution is (1-x) x^k with x = n/(n+1); the weight above n_max
        is x^(n_max+1).
        """
        x = bath.n / (bath.n + 1.0)
        return cls(n_max=n_max, leakage_estimate=x ** (n_max + 1))


@dataclass(frozen=True)
class FullState:
    """Validated composite density matrix (read-only)."""

    rho: np.ndarray
    n_max: int

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_matrix(cls, rho, n_max: int | None = None,
                    trace_tol: float = 1e-8, herm_tol: float = 1e-8,
                    psd_tol: float = 1e-7) -> "FullState":
        rho = np.asarray(rho, dtype=complex)
        if n_max is None:
            n_max = infer_n_max(rho.shape[0])
        dim = 4 * (n_max + 1) ** 2
        if rho.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {rho.shape}")
        tr = np.trace(rho)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} differs from 1 by > {trace_tol}")
        if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
            raise ValueError("matrix is not Hermitian within tolerance")
        low = np.linalg.eigvalsh(rho)[0]
        if low < -psd_tol:
            raise ValueError(f"matrix not positive: min eigenvalue {low:.3e}")
        return cls(rho, n_max)


def infer_n_max(dim: int) -> int:
    """Recover n_max from a composite matrix dimension 4 (n_max+1)^2."""
    f = math.isqrt(dim // 4)
    if 4 * f * f != dim:
        raise ValueError(f"dimension {dim} is not 4 (n_max+1)^2")
    return f - 1


def _as_matrix(state) -> np.ndarray:
    return np.asarray(getattr(state, "rho", state), dtype=complex)


def build_hamiltonian(rates: SystemRates, n_max: int) -> np.ndarray:
    """Resonant exchange coupling of each qubit to its own mode."""
    o = _ops(n_max)
    h = (o["sp1"] @ o["a"] + o["ad"] @ o["sm1"]
         + o["sp2"] @ o["b"] + o["bd"] @ o["sm2"])
    return rates.rabi_omega * h


def excitation_number(n_max: int) -> np.ndarray:
    """Total excitation operator; commutes with the coupling exactly."""
    return _ops(n_max)["n_exc"].copy()


def cavity_liouvillian(rho, bath: BathParams, kappa: float) -> np.ndarray:
    """Dissipative action of the squeezed drive on the two modes alone."""
    rho = _as_matrix(rho)
    o = _ops(infer_n_max(rho.shape[0]))
    n, m = bath.n, bath.m
    a, b, ad, bd = o["a"], o["b"], o["ad"], o["bd"]

    def dis(x, xd):
        xdx = xd @ x
        return x @ rho @ xd - 0.5 * (xdx @ rho + rho @ xdx)

    out = 2.0 * kappa * (n + 1.0) * (dis(a, ad) + dis(b, bd))
    out += 2.0 * kappa * n * (dis(ad, a) + dis(bd, b))
    if m != 0.0:
        ab = a @ b
        cross = a @ rho @ b + b @ rho @ a - ab @ rho - rho @ ab
        cross += cross.conj().T
        out += 2.0 * kappa * m * cross
    return out


def spontaneous_emission_terms(rho, gamma_atomic: float) -> np.ndarray:
    """Local decay of each qubit at rate gamma_atomic (trace-free exactly)."""
    rho = _as_matrix(rho)
    o = _ops(infer_n_max(rho.shape[0]))
    out = np.zeros_like(rho)
    for sm, sp in ((o["sm1"], o["sp1"]), (o["sm2"], o["sp2"])):
        spsm = sp @ sm
        out += gamma_atomic * (sm @ rho @ sp
                               - 0.5 * (spsm @ rho + rho @ spsm))
    return out


def _rhs_parts(rates: SystemRates, bath: BathParams, n_max: int):
    """Precompute K and the sandwich (left, right, weight) list."""
    o = _ops(n_max)
    kappa, gamma = rates.cavity_kappa, rates.atomic_gamma
    n, m = bath.n, bath.m
    a, b, ad, bd = o["a"], o["b"], o["ad"], o["bd"]
    k_mat = -1.0j * build_hamiltonian(rates, n_max)
    k_mat -= kappa * (n + 1.0) * (ad @ a + bd @ b)
    k_mat -= kappa * n * (a @ ad + b @ bd)
    if m != 0.0:
        k_mat -= 2.0 * kappa * m * (a @ b + ad @ bd)
    sandwiches = [
        (2.0 * kappa * (n + 1.0), a, ad), (2.0 * kappa * (n + 1.0), b, bd),
        (2.0 * kappa * n, ad, a), (2.0 * kappa * n, bd, b),
    ]
    if m != 0.0:
        sandwiches += [
            (2.0 * kappa * m, a, b), (2.0 * kappa * m, b, a),
            (2.0 * kappa * m, ad, bd), (2.0 * kappa * m, bd, ad),
        ]
    if gamma > 0.0:
        k_mat -= 0.5 * gamma * (o["sp1"] @ o["sm1"] + o["sp2"] @ o["sm2"])
        sandwiches += [(gamma, o["sm1"], o["sp1"]), (gamma, o["sm2"], o["sp2"])]
    return k_mat, sandwiches


def make_full_rhs(rates: SystemRates, bath: BathParams, n_max: int):
    """Matrix-map right-hand side d rho/dt for the composite master equation.

    Every factor carries O(dim) nonzeros, so sparse products keep one
    evaluation at O(dim^2) instead of the O(dim^3) of dense sandwiches.
    """
    k_mat, sandwiches = _rhs_parts(rates, bath, n_max)
    k_left = sparse.csr_matrix(k_mat)
    k_right = sparse.csr_matrix(k_mat.conj().T)
    terms = [(w, sparse.csr_matrix(left), sparse.csr_matrix(right))
             for w, left, right in sandwiches]

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = k_left @ rho + rho @ k_right
        for w, left, right in terms:
            out += w * ((left @ rho) @ right)
        return out

    return rhs


def top_level_population(rho, n_max: int | None = None) -> float:
    """Probability weight on basis states with either mode at the cutoff."""
    rho = _as_matrix(rho)
    if n_max is None:
        n_max = infer_n_max(rho.shape[0])
    mask = _ops(n_max)["top_mask"]
    return float(np.sum(np.diag(rho).real[mask]))


def _check_truncation(rho: np.ndarray, bath: BathParams, n_max: int) -> None:
    """Estimate the weight lost above the cutoff from the top-level weight.

    For a geometric number distribution the weight above n_max equals the
    weight at n_max times x/(1-x); the factor degrades to 1 for x = 0.
    """
    w_top = top_level_population(rho, n_max)
    x = bath.n / (bath.n + 1.0)
    factor = x / (1.0 - x) if x > 0.0 else 1.0
    estimate = w_top * factor
    if estimate > TOP_LEVEL_BUDGET:
        raise TruncationOverflow(
            f"estimated weight above the Fock cutoff {estimate:.3e} exceeds "
            f"{TOP_LEVEL_BUDGET:g} (top-level weight {w_top:.3e})")


@dataclass(frozen=True)
class FullTrajectory:
    times: np.ndarray
    states: list

    def final(self) -> FullState:
        return self.states[-1]


def stable_fixed_step(rates: SystemRates, bath: BathParams, n_max: int) -> float:
    """Step small enough for the classic fourth-order rule at this stiffness."""
    scale = 2.0 * rates.cavity_kappa * (bath.n + 1.0) * (n_max + 1)
    scale = max(scale, rates.rabi_omega, rates.atomic_gamma, 1e-12)
    return 0.5 / scale


def evolve_full(rho0, rates: SystemRates, bath: BathParams, t_grid,
                rtol: float = FULL_REL_TOL, atol: float = FULL_ABS_TOL,
                method: str = "adaptive", fixed_step: float | None = None,
                validate: bool = True) -> FullTrajectory:
    """Integrate the composite master equation and sample on t_grid.

    Raises TruncationOverflow up front when the stationary leakage estimate
    for the bath already exceeds the budget, and along the way when the
    sampled top-level weight implies too much population above the cutoff.
    """
    rho0 = _as_matrix(rho0)
    n_max = infer_n_max(rho0.shape[0])
    budget = TruncationBudget.for_bath(bath, n_max)
    if budget.leakage_estimate >= TOP_LEVEL_BUDGET:
        raise TruncationOverflow(
            f"stationary leakage estimate {budget.leakage_estimate:.3e} at "
            f"n_max = {n_max} exceeds {TOP_LEVEL_BUDGET:g}; raise n_max")
    FullState.from_matrix(rho0, n_max)
    rhs_mat = make_full_rhs(rates, bath, n_max)
    dim = rho0.shape[0]

    def rhs_vec(_t, y):
        return rhs_mat(y.reshape(dim, dim)).ravel()

    t_grid = np.asarray(t_grid, dtype=float)
    if method == "adaptive":
        flat = integrate.solve_adaptive(rhs_vec, rho0.astype(complex).ravel(),
                                        t_grid, rtol=rtol, atol=atol)
    elif method == "fixed":
        if fixed_step is None:
            fixed_step = stable_fixed_step(rates, bath, n_max)
        flat = integrate.solve_fixed_rk4(rhs_vec, rho0.astype(complex).ravel(),
                                         t_grid, max_step=fixed_step)
    else:
        raise ValueError(f"unknown method {method!r}")
    states = []
    for row in flat:
        rho = row.reshape(dim, dim)
        rho = 0.5 * (rho + rho.conj().T)
        _check_truncation(rho, bath, n_max)
        if validate:
            states.append(FullState.from_matrix(rho, n_max))
        else:
            states.append(FullState(rho, n_max))
    return FullTrajectory(times=t_grid, states=states)


def reduced_qubit_state(state) -> np.ndarray:
    """Partial trace over both modes; 4x4 qubit-pair density matrix."""
    rho = _as_matrix(state)
    n_max = infer_n_max(rho.shape[0])
    f = n_max + 1
    t = rho.reshape(2, 2, f, f, 2, 2, f, f)
    return np.einsum("pqabrsab->pqrs", t).reshape(4, 4)


def cavity_moments(state) -> dict[str, complex]:
    """Second moments of the two modes: occupations and the cross pairing."""
    rho = _as_matrix(state)
    o = _ops(infer_n_max(rho.shape[0]))
    return {
        "n_a": complex(np.trace(o["ad"] @ o["a"] @ rho)),
        "n_b": complex(np.trace(o["bd"] @ o["b"] @ rho)),
        "m_ab": complex(np.trace(o["a"] @ o["b"] @ rho)),
    }


def _require_min_uncertainty(bath: BathParams) -> float:
    """Squeezing parameter r for a bath on the physicality ceiling."""
    target = math.sqrt(bath.n * (bath.n + 1.0))
    if abs(bath.m - target) > 1e-9 * max(1.0, target):
        raise Unphysical(
            f"m = {bath.m} is not on the minimum-uncertainty line "
            f"sqrt(n(n+1)) = {target}")
    return math.asinh(math.sqrt(bath.n))


def trap_state(bath: BathParams, n_max: int) -> np.ndarray:
    """Dark state of the transformed generator: a qubit-pair superposition
    over |gg> and |ee> with both modes empty.

    Requires a minimum-uncertainty bath; amplitudes are sqrt((n+1)/(2n+1))
    on |gg,00> and sqrt(n/(2n+1)) on |ee,00>.
    """
    _require_min_uncertainty(bath)
    o = _ops(n_max)
    n = bath.n
    psi = np.zeros(o["dim"], dtype=complex)
    psi[basis_index("gg", 0, 0, n_max)] = math.sqrt((n + 1.0) / (2.0 * n + 1.0))
    psi[basis_index("ee", 0, 0, n_max)] = math.sqrt(n / (2.0 * n + 1.0))
    return psi


def squeeze_operator(r: float, n_max: int) -> np.ndarray:
    """Two-mode squeezing matrix exp(r (a^dag b^dag - a b)) on the mode space.

    Computed by scaling-and-squaring on the truncated generator; unitary only
    up to truncation (see squeeze_unitarity_defect).
    """
    f = n_max + 1
    i_f = np.eye(f, dtype=complex)
    ann = np.zeros((f, f), dtype=complex)
    for k in range(n_max):
        ann[k, k + 1] = math.sqrt(k + 1.0)
    a = np.kron(ann, i_f)
    b = np.kron(i_f, ann)
    gen = a.conj().T @ b.conj().T - a @ b
    return expm(r * gen)


def squeeze_unitarity_defect(r: float, n_max: int) -> float:
    s = squeeze_operator(r, n_max)
    return float(np.max(np.abs(s.conj().T @ s - np.eye(s.shape[0]))))


def squeeze_transform(rho, r: float) -> np.ndarray:
    """Conjugate a composite state by the (qubit-identity) squeezing matrix."""
    rho = _as_matrix(rho)
    s = np.kron(np.eye(4, dtype=complex), squeeze_operator(r, infer_n_max(rho.shape[0])))
    return s @ rho @ s.conj().T


def squeezed_hamiltonian(rates: SystemRates, r: float, n_max: int) -> np.ndarray:
    """Coupling Hamiltonian conjugated into the picture where the drive is empty."""
    h = build_hamiltonian(rates, n_max)
    s = np.kron(np.eye(4, dtype=complex), squeeze_operator(r, n_max))
    return s @ h @ s.conj().T


def trap_population_rate(rho, bath: BathParams, kappa: float) -> float:
    """Growth rate of the trap-state population sourced by the rest of rho.

    In the transformed picture the jump operators are sqrt(2 kappa) a and
    sqrt(2 kappa) b, both of which annihilate the trap vector, so the only
    contribution is the sandwich term: sum_i <Psi| C_i rho C_i^dag |Psi>.
    Zero when rho is the trap state itself; manifestly linear in kappa.
    """
    rho = _as_matrix(rho)
    n_max = infer_n_max(rho.shape[0])
    o = _ops(n_max)
    psi = trap_state(bath, n_max)
    rate = 0.0
    for x in (o["a"], o["b"]):
        w = x.conj().T @ psi
        rate += 2.0 * kappa * float((w.conj() @ rho @ w).real)
    return rate


@dataclass(frozen=True)
class ModelComparison:
    """Cross-validation of the composite model against the reduced one."""

    tau: np.ndarray
    trace_distances: np.ndarray
    negativity_full: np.ndarray
    negativity_reduced: np.ndarray

    @property
    def max_trace_distance(self) -> float:
        return float(np.max(self.trace_distances))


def compare_with_reduced(rates: SystemRates, bath: BathParams, n_max: int,
                         tau_grid, initial: str = "gg",
                         method: str = "adaptive",
                         validate: bool = False) -> ModelComparison:
    """Run both models from the same qubit state (modes empty) and compare.

    tau_grid is in units of the eliminated decay rate; the composite model is
    integrated in physical time tau / gamma and its qubit pair is traced out
    at each sample.
    """
    from . import bloch as bloch_mod
    from . import metrics
    from .linalg import trace_distance

    tau_grid = np.asarray(tau_grid, dtype=float)
    gamma = rates.gamma
    o = _ops(n_max)
    rho0 = np.zeros((o["dim"], o["dim"]), dtype=complex)
    idx = basis_index(initial, 0, 0, n_max)
    rho0[idx, idx] = 1.0
    full = evolve_full(rho0, rates, bath, tau_grid / gamma, method=method,
                       validate=validate)
    reduced = bloch_mod.evolve(bloch_mod.INITIAL_STATES[initial], bath,
                               tau_grid, method=method)
    dists = np.empty(tau_grid.size)
    neg_full = np.empty(tau_grid.size)
    neg_red = np.empty(tau_grid.size)
    for i in range(tau_grid.size):
        rho_atoms = reduced_qubit_state(full.states[i])
        v = reduced.vector(i)
        rho_bloch = bloch_mod.reconstruct_density(v).rho
        dists[i] = trace_distance(rho_atoms, rho_bloch)
        neg_full[i] = metrics.negativity(rho_atoms)
        neg_red[i] = metrics.x_state_negativity(v.p_ee, v.p_eg, v.p_ge,
                                                v.p_gg, v.coh)
    return ModelComparison(tau=tau_grid, trace_distances=dists,
                           negativity_full=neg_full, negativity_reduced=neg_red)
