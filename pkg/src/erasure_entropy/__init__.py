"""Erasure entropies of Markov chains and two-dimensional Ising models."""

from .entropy import (
    Dist,
    EntropyValue,
    JointTable,
    Unit,
    binary_entropy,
    conditional_entropy,
    erasure_entropy_block,
    shannon_entropy,
)
from .errors import (
    BudgetError,
    ConvergenceError,
    ErasureEntropyError,
    InconsistentInputError,
    MixingFailureError,
    NearCriticalError,
    StructureError,
    ValidationError,
)
from .hexagonal import (
    CRITICAL_J,
    DerivativeConfig,
    HexClassProbs,
    HexPipelineResult,
    QuadratureConfig,
    erasure_entropy_hex,
    hex_class_probs,
    hex_pipeline,
    hex_torus_observables,
    nn_correlation_hex,
    pressure_hex,
)
from .lattice import (
    LatticeSpec,
    TorusMeasure,
    correlation,
    enumerate_torus,
    free_energy_content,
    hamiltonian_window,
    lts_check,
    single_site_conditional,
    torus_erasure_entropy,
    torus_gibbs_erasure,
    volume_normalized_erasure,
)
from .markov import (
    BlockLaw,
    DmeSpec,
    MarkovSpec,
    binary_symmetric_chain,
    block_given_past_entropy,
    dme_bound_report,
    dme_conditional_entropy,
    entropy_rate,
    erasure_rate,
    iid_chain,
    interval_erasure_rate,
    markov_identity_residual,
    stationary_block_law,
    stationary_window_distribution,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    estimate_class_frequencies,
    estimate_correlations,
    estimate_erasure_entropy,
    heat_bath_sweep,
)
from .square import (
    BoundaryClassProbs,
    CorrelationTriple,
    class_frequencies_from_torus,
    class_probs_from_correlations,
    correlations_from_class_probs,
    correlations_from_mc,
    correlations_from_strip,
    correlations_from_torus,
    erasure_entropy_square,
)

__version__ = "0.1.0"
