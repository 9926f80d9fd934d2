"""POVM-based coherence of states and measure-induced dynamical coherence of channels."""
from .coherence import (
    BatchCoherence,
    block_relative_entropy_coherence,
    povm_dephasing_residual,
    povm_relative_entropy_coherence,
    standard_relative_entropy_coherence,
)
from .core import (
    BlochPoint,
    Channel,
    DensityMatrix,
    Povm,
    ProjectiveMeasurement,
    apply_channel,
    bloch_point_of,
    bloch_state,
    compose,
    convex_combination,
    outcome_probabilities,
    post_measurement_state,
)
from .dynamical import (
    CmioVerdict,
    OptimizerConfig,
    PowerResult,
    certify_cmio,
    dynamical_coherence,
    maximize_over_states,
    power,
)
from .errors import (
    CoherenceError,
    DimensionMismatchError,
    NotPSDError,
    NumericalInconsistencyError,
    OptimizerError,
    OutcomeUnreachableError,
    ValidationError,
)
from .naimark import NaimarkExtension, canonical_extension, embed_state, verify_extension
from .sampling import random_density_matrix, random_povm, random_unitary
from .scenarios import (
    build_paper_example,
    check_mixed_state_bounds,
    sweep_pure_states,
)
from .numerics import (
    hermitian_eigendecomposition,
    psd_sqrt,
    shannon_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
