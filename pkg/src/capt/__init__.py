"""Correlation-assisted quantum process tomography.

Local operations on the probe half of a correlated bipartite state turn it
into a set of inputs from which an unknown channel is reconstructed by
linear inversion. The package builds such sets, certifies them, and runs
closed-loop simulated experiments.
"""

from .channels import (
    CPViolationError,
    LinearMap,
    QuantumChannel,
    apply,
    apply_local_a,
    depolarizing,
    from_kraus,
    identity_channel,
    make_gamma,
    make_gamma_tilde,
    max_cp_epsilon,
    random_channel,
    unitary_channel,
)
from .constructions import (
    ConstructionError,
    ForbiddenInputError,
    NotDiscordantError,
    qubit_discord_test,
    qubit_discord_unitary,
    representative_sets,
    sigma_family,
    theorem1_channel_set,
    theorem2_unitary_set,
    theorem3_pure_unitaries,
    theorem3_state_unitaries,
    weyl_orbits,
)
from .faithfulness import (
    FaithfulnessReport,
    frame_bounds,
    is_faithful_set,
    local_span_dim,
    twirl,
    twirl_coefficients,
)
from .schmidt import OperatorSchmidtDecomposition, operator_schmidt_decompose, osr, schmidt_decompose_pure
from .states import BipartiteState, InvalidStateError, maximally_entangled_state, product_state, pure_state
from .tomography import ExperimentPlan, ReconstructionResult, reconstruct, run_experiment, simulate_outputs

__version__ = "0.1.0"
