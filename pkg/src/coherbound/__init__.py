"""Lower bounds on l1 quantum coherence from the commutator of an observable
with its diagonal part."""

__version__ = "0.1.0"

from .operators import (
    CoherBoundError,
    DensityMatrix,
    DimensionMismatchError,
    EigensolverError,
    HermitianOperator,
    InvariantError,
    PreconditionError,
    PureState,
    SpectralDecomposition,
    Tolerances,
    commutator,
    expectation,
    frobenius_inner,
    spectral,
    variance,
)
from .basis import BasisCoefficients, OperatorBasis, expand, generalized_gell_mann, project
from .sampling import Sampler, SamplerConfig, random_density, random_observable, random_pure
from .coherence import (
    Decomposition,
    RoofBudget,
    RoofEstimate,
    enumerate_decomposition,
    is_incoherent,
    l1_matrix,
    l1_pure,
    roof_estimate,
)
from .bound import (
    BoundReport,
    QubitBloch,
    bloch_observable,
    bound_check,
    commutator_expectation,
    diagonal_part_state,
    incoherent_part,
    optimal_observable,
    qubit_closed_form,
    witness_operator,
)
from .shots import ShotResult, estimate_bound_from_shots, simulate_measurement

__all__ = [
    "__version__",
    "CoherBoundError",
    "DensityMatrix",
    "DimensionMismatchError",
    "EigensolverError",
    "HermitianOperator",
    "InvariantError",
    "PreconditionError",
    "PureState",
    "SpectralDecomposition",
    "Tolerances",
    "commutator",
    "expectation",
    "frobenius_inner",
    "spectral",
    "variance",
    "BasisCoefficients",
    "OperatorBasis",
    "expand",
    "generalized_gell_mann",
    "project",
    "Sampler",
    "SamplerConfig",
    "random_density",
    "random_observable",
    "random_pure",
    "Decomposition",
    "RoofBudget",
    "RoofEstimate",
    "enumerate_decomposition",
    "is_incoherent",
    "l1_matrix",
    "l1_pure",
    "roof_estimate",
    "BoundReport",
    "QubitBloch",
    "bloch_observable",
    "bound_check",
    "commutator_expectation",
    "diagonal_part_state",
    "incoherent_part",
    "optimal_observable",
    "qubit_closed_form",
    "witness_operator",
    "ShotResult",
    "estimate_bound_from_shots",
    "simulate_measurement",
]
