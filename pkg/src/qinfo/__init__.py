"""Desk-scale toolkit for classical and quantum information.

Exact density-matrix linear algebra plus seeded simulations: entropies and
channel capacities, measurements and channels, state discrimination,
entanglement and CHSH tests, QKD / teleportation / superdense coding /
entanglement swapping / purification protocols, typical-subspace compression
and quantum error-correction checking.
"""

from .exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    EnumerationCapError,
    ValidationError,
)
from .probability import (
    DiscreteChannel,
    Distribution,
    JointDistribution,
    LogBase,
    bayes_posterior,
    binary_entropy,
    binary_symmetric_channel,
    channel_capacity_closed,
    channel_capacity_numeric,
    conditional_entropy,
    kl_divergence,
    mutual_information,
    noiseless_channel,
    noisy_coding_demo,
    shannon_entropy,
    ternary_channel,
    typical_set,
)
from .states import (
    DensityOperator,
    SchmidtForm,
    SpectralDecomposition,
    StateVector,
    fidelity,
    hilbert_angle,
    partial_trace,
    purify,
    schmidt_decompose,
    statistical_overlap,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from .dynamics import (
    KrausChannel,
    Povm,
    ProjectiveMeasurement,
    apply_channel,
    choi_matrix,
    is_completely_positive,
    measure_probabilities,
    povm_via_ancilla,
    projective_update,
)
from .discrimination import (
    DiscriminationProblem,
    Ensemble,
    accessible_information_search,
    chernoff_bound,
    classical_overlap,
    error_probability,
    holevo_chi,
    povm_mutual_information,
    preparation_information,
    unambiguous_discriminator,
)
from .entanglement import (
    BELL_LABELS,
    BellLabel,
    ChshSetting,
    E91_SETTING,
    WernerState,
    apply_pair_op,
    bell_state,
    chsh_value,
    entanglement_entropy,
    fidelity_to_phi_plus,
    is_separable_pure,
    twirl,
    werner_density,
)
from .protocols import (
    EveStrategy,
    QkdTranscript,
    bb84,
    ekert91,
    entanglement_swap,
    purify_step_analytic,
    purify_step_simulated,
    run_purification,
    superdense_send,
    teleport,
)
from .coding import (
    CodeSubspace,
    PauliErrorSet,
    build_typical_subspace,
    hamming_bound,
    qecc_check,
    recovery_demo,
    schumacher_roundtrip,
)
from .rng import substream

__version__ = "0.1.0"
