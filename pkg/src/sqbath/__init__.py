"""Two qubits in lossy cavities driven by a broadband squeezed field.

The package simulates how the field's two-mode correlations transfer to a
qubit pair: a reduced four-variable model with its exact stationary state,
entanglement and purity metrics, the short-time generation criterion, the
stationary entanglement threshold, and the unreduced qubit-cavity model used
to check the reduction.
"""

__version__ = "0.1.0"

from .bloch import (
    INITIAL_STATES,
    BlochVector,
    Trajectory,
    TwoQubitState,
    bloch_from_density,
    bloch_rhs,
    evolve,
    reconstruct_density,
    steady_state,
)
from .boundary import (
    boundary_closed_form,
    boundary_closed_form_readings,
    boundary_comparison,
    boundary_numeric,
    boundary_with_spontaneous_emission,
)
from .cavity import (
    FullState,
    FullTrajectory,
    ModelComparison,
    TruncationBudget,
    build_hamiltonian,
    cavity_liouvillian,
    compare_with_reduced,
    evolve_full,
    reduced_qubit_state,
    spontaneous_emission_terms,
    squeeze_operator,
    squeeze_transform,
    squeezed_hamiltonian,
    trap_population_rate,
    trap_state,
)
from .criterion import (
    CriterionResult,
    DissipatorBlocks,
    InitialAngles,
    asymmetric_condition,
    build_blocks,
    entanglement_condition,
    gg_condition,
)
from .linalg import SpectralResult, jacobi_eigh, spectral, trace_distance
from .metrics import (
    linear_entropy,
    negativity,
    partial_transpose,
    x_state_linear_entropy,
    x_state_negativity,
    x_state_pt_eigenvalues,
)
from .params import (
    AsymmetricBathParams,
    BathParams,
    EffectiveBath,
    NegativeParam,
    NoTransition,
    SingularSystem,
    StepFailure,
    SystemRates,
    TruncationOverflow,
    Unphysical,
    UnsupportedInitialState,
    effective_bath,
    physicality_tolerance,
    validate_bath,
)

__all__ = [name for name in dir() if not name.startswith("_")]
