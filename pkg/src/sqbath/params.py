"""Parameter containers, validation, and the spontaneous-emission mapping.

All bath quantities are dimensionless.  A broadband squeezed reservoir seen
by the two qubits is characterised by a mean excitation number ``n`` (phase
insensitive) and a two-photon correlation ``m`` (phase sensitive, taken real
and non-negative without loss of generality).  Physical correlations satisfy
m^2 <= n(n+1); equality is the minimum-uncertainty point n = sinh^2(r),
m = sinh(r) cosh(r) for squeezing strength r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class Unphysical(ValueError):
    """Bath correlations exceed the physical bound m^2 <= n(n+1)."""


class NegativeParam(ValueError):
    """A parameter that must be non-negative (or positive) is out of range."""


class StepFailure(RuntimeError):
    """The adaptive integrator failed to meet its error tolerance."""


class SingularSystem(ArithmeticError):
    """A steady-state linear system could not be solved."""


class PositivityViolation(ValueError):
    """A matrix that must be a density operator has a negative eigenvalue."""


class UnsupportedInitialState(ValueError):
    """Initial state lies outside the closed family the reduced model evolves."""


class NoTransition(RuntimeError):
    """No separable-to-entangled transition exists in the search bracket."""


class TruncationOverflow(RuntimeError):
    """Fock-space truncation is too small for the requested bath."""


def physicality_tolerance(n: float) -> float:
    # 1e-12 absolute is tighter than one rounding of m = sqrt(n(n+1)) once
    # n(n+1) is large, so the bound is scaled with the quantity it guards.
    return 1e-12 * max(1.0, n * (n + 1.0))


def _check_pair(n: float, m: float, label_n: str = "n", label_m: str = "m") -> None:
    if not math.isfinite(n) or n < 0.0:
        raise NegativeParam(f"{label_n} must be finite and >= 0, got {n}")
    if not math.isfinite(m) or m < 0.0:
        raise NegativeParam(f"{label_m} must be finite and >= 0, got {m}")


@dataclass(frozen=True)
class BathParams:
    """Symmetric squeezed-bath parameters shared by both qubits."""

    n_phase_insensitive: float  # mean excitation number, >= 0
    m_phase_sensitive: float    # two-photon correlation, real, >= 0

    def __post_init__(self) -> None:
        n, m = self.n_phase_insensitive, self.m_phase_sensitive
        _check_pair(n, m)
        gap = m * m - n * (n + 1.0)
        if gap > physicality_tolerance(n):
            raise Unphysical(
                f"m^2 - n(n+1) = {gap:.6e} > 0: phase-sensitive correlation "
                f"stronger than a physical reservoir allows"
            )

    @property
    def n(self) -> float:
        return self.n_phase_insensitive

    @property
    def m(self) -> float:
        return self.m_phase_sensitive

    @classmethod
    def from_squeezing(cls, r: float) -> "BathParams":
        """Minimum-uncertainty bath for squeezing strength r >= 0."""
        if r < 0.0:
            raise NegativeParam(f"squeezing strength must be >= 0, got {r}")
        return cls(math.sinh(r) ** 2, math.sinh(r) * math.cosh(r))

    def squeezing(self) -> float:
        """Squeezing strength r with sinh^2(r) = n (uses n only)."""
        return math.asinh(math.sqrt(self.n))


def validate_bath(bath: BathParams) -> BathParams:
    """Re-run the physicality checks; idempotent on valid input."""
    BathParams(bath.n_phase_insensitive, bath.m_phase_sensitive)
    return bath


@dataclass(frozen=True)
class AsymmetricBathParams:
    """Bath with distinct mean excitation numbers at the two qubits."""

    n_a: float
    n_b: float
    m: float

    def __post_init__(self) -> None:
        _check_pair(self.n_a, self.m, "n_a", "m")
        _check_pair(self.n_b, self.m, "n_b", "m")
        bound = math.sqrt(self.n_a * (self.n_a + 1.0) * self.n_b * (self.n_b + 1.0))
        if self.m * self.m - bound > physicality_tolerance(max(self.n_a, self.n_b)):
            raise Unphysical(
                f"m^2 = {self.m**2:.6e} exceeds the cross-correlation bound "
                f"sqrt(n_a(n_a+1) n_b(n_b+1)) = {bound:.6e}"
            )


@dataclass(frozen=True)
class SystemRates:
    """Physical rates of the cavity-mediated coupling.

    ``cavity_kappa`` is the field-amplitude decay rate of each cavity; the
    intracavity photon number relaxes at twice this rate.  In the adiabatic
    regime (kappa >> rabi_omega) each qubit decays at
    gamma = 2 rabi_omega^2 / cavity_kappa.
    """

    rabi_omega: float     # qubit-cavity coupling, > 0
    cavity_kappa: float   # cavity field decay rate, > 0
    atomic_gamma: float = 0.0  # spontaneous emission into side channels, >= 0

    def __post_init__(self) -> None:
        if not (self.rabi_omega > 0.0 and math.isfinite(self.rabi_omega)):
            raise NegativeParam(f"rabi_omega must be > 0, got {self.rabi_omega}")
        if not (self.cavity_kappa > 0.0 and math.isfinite(self.cavity_kappa)):
            raise NegativeParam(f"cavity_kappa must be > 0, got {self.cavity_kappa}")
        if not (self.atomic_gamma >= 0.0 and math.isfinite(self.atomic_gamma)):
            raise NegativeParam(f"atomic_gamma must be >= 0, got {self.atomic_gamma}")

    @property
    def gamma(self) -> float:
        """Adiabatic qubit decay rate 2 Omega^2 / kappa (no side channels)."""
        return 2.0 * self.rabi_omega**2 / self.cavity_kappa

    @property
    def cooperativity(self) -> float:
        """Ratio of cavity-mediated decay to spontaneous emission."""
        if self.atomic_gamma == 0.0:
            return math.inf
        return self.gamma / self.atomic_gamma


@dataclass(frozen=True)
class EffectiveBath:
    """Bath parameters of the reduced qubit dynamics after side-channel loss.

    Produced by :func:`effective_bath`; carries no validation so that edge
    cases can be constructed directly in analysis code.
    """

    gamma_eff: float
    n_eff: float
    m_eff: float
    cooperativity: float

    @property
    def n(self) -> float:
        return self.n_eff

    @property
    def m(self) -> float:
        return self.m_eff


def effective_bath(bath: BathParams, rates: SystemRates) -> EffectiveBath:
    """Map bare bath and system rates onto the reduced qubit dynamics.

    Spontaneous emission at rate Gamma dilutes the squeezed input.  With
    cooperativity C = 2 Omega^2 / (Gamma kappa) the qubits effectively see

        n' = C n / (1 + C),    m' = C m / (1 + C).

    The effective decay rate is fixed by preserving the absorption rate
    gamma * n of the bare dynamics (gamma' n' = gamma n), which gives
    gamma' = gamma + Gamma and reduces to gamma = 2 Omega^2 / kappa when
    Gamma = 0.  For any Gamma > 0 and m > 0 the image satisfies
    m' < sqrt(n'(n'+1)) strictly: loss pulls the bath off the
    minimum-uncertainty surface.
    """
    gamma = rates.gamma
    if rates.atomic_gamma == 0.0:
        return EffectiveBath(gamma_eff=gamma, n_eff=bath.n, m_eff=bath.m,
                             cooperativity=math.inf)
    c = rates.cooperativity
    dilution = c / (1.0 + c)
    return EffectiveBath(
        gamma_eff=gamma + rates.atomic_gamma,
        n_eff=dilution * bath.n,
        m_eff=dilution * bath.m,
        cooperativity=c,
    )
